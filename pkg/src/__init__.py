"""PFS Throughput Oracle - Main Package"""

__version__ = "1.0.1"
__author__ = "Chanderbhan Swami"
__license__ = "MIT"
