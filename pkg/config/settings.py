"""
Configuration management for the PFS throughput oracle
"""
import os
from pathlib import Path
from typing import List
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Base paths
BASE_DIR = Path(__file__).resolve().parent.parent
CONFIG_DIR = BASE_DIR / 'config'
EXPORT_DIR = BASE_DIR / os.getenv('EXPORT_DIR', 'exports')
LOG_DIR = BASE_DIR / os.getenv('LOG_DIR', 'logs')

# Shipped data files
DEFAULT_MCS_TABLE = CONFIG_DIR / 'mcs_cqi_default.txt'
SCENARIO_DIR = CONFIG_DIR / 'scenarios'


def _env_bool(name: str, default: str = 'false') -> bool:
    return os.getenv(name, default).lower() == 'true'


class QuadratureSettings:
    """Adaptive quadrature defaults"""
    ABS_TOL = float(os.getenv('PFS_QUAD_ABS_TOL', 1e-10))
    REL_TOL = float(os.getenv('PFS_QUAD_REL_TOL', 1e-8))
    MAX_SUBDIVISIONS = int(os.getenv('PFS_QUAD_MAX_SUBDIVISIONS', 200))
    # exp_substitution | rational_substitution | truncate_at
    TAIL_TRANSFORM = os.getenv('PFS_QUAD_TAIL_TRANSFORM', 'exp_substitution')


class AnalyticSettings:
    """Closed-form evaluation thresholds"""
    # Condition estimate above which subset sums are accumulated in extended precision
    EXTENDED_PRECISION_THRESHOLD = float(os.getenv('PFS_EXTENDED_PRECISION_THRESHOLD', 1e8))
    # Condition estimate above which the closed form is abandoned for quadrature
    ILL_CONDITION_THRESHOLD = float(os.getenv('PFS_ILL_CONDITION_THRESHOLD', 1e12))
    TERM_CAP = int(os.getenv('PFS_TERM_CAP', 10_000_000))
    ROOT_SEPARATION_TOL = float(os.getenv('PFS_ROOT_SEPARATION_TOL', 1e-9))
    ROOT_PERTURBATION = float(os.getenv('PFS_ROOT_PERTURBATION', 1e-7))
    ORACLE_CHECK_POINTS = int(os.getenv('PFS_ORACLE_CHECK_POINTS', 16))
    CROSS_CHECK_REL_TOL = float(os.getenv('PFS_CROSS_CHECK_REL_TOL', 1e-6))
    EXTENDED_PRECISION_DPS = int(os.getenv('PFS_EXTENDED_PRECISION_DPS', 34))


class SimulatorSettings:
    """Monte-Carlo simulator defaults"""
    CHUNK_SLOTS = int(os.getenv('PFS_SIM_CHUNK_SLOTS', 2000))
    SAMPLE_CAP = int(os.getenv('PFS_SIM_SAMPLE_CAP', 20000))
    HIST_MIN_DB = float(os.getenv('PFS_SIM_HIST_MIN_DB', -30.0))
    HIST_MAX_DB = float(os.getenv('PFS_SIM_HIST_MAX_DB', 50.0))
    HIST_STEP_DB = float(os.getenv('PFS_SIM_HIST_STEP_DB', 1.0))


class FrameDefaults:
    """OFDMA frame constants used when a scenario omits them (LTE 5 MHz)"""
    N_RB = int(os.getenv('PFS_FRAME_N_RB', 25))
    N_S = int(os.getenv('PFS_FRAME_N_S', 14))
    N_C = int(os.getenv('PFS_FRAME_N_C', 12))
    T_TTI = float(os.getenv('PFS_FRAME_T_TTI', 1e-3))
    WINDOW = int(os.getenv('PFS_FRAME_WINDOW', 1000))


class OracleConfig:
    """Parallel evaluation configuration"""
    THREADS = int(os.getenv('PFS_ORACLE_THREADS', 0)) or (os.cpu_count() or 1)


class ExportConfig:
    """Export configuration"""
    FORMATS = [f.strip() for f in os.getenv('EXPORT_FORMATS', 'csv,pretty').split(',') if f.strip()]
    FLOAT_FORMAT = os.getenv('EXPORT_FLOAT_FORMAT', '.17g')


class LogConfig:
    """Logging configuration"""
    LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    TO_FILE = _env_bool('LOG_TO_FILE')
    MAX_SIZE = int(os.getenv('LOG_MAX_SIZE', 100)) * 1024 * 1024  # Convert to bytes
    BACKUP_COUNT = int(os.getenv('LOG_BACKUP_COUNT', 5))


# Initialize configuration instances
quadrature_config = QuadratureSettings()
analytic_config = AnalyticSettings()
simulator_config = SimulatorSettings()
frame_defaults = FrameDefaults()
oracle_config = OracleConfig()
export_config = ExportConfig()
log_config = LogConfig()


def validate_configuration() -> List[str]:
    """Validate configuration and return list of warnings/errors"""
    issues = []

    if quadrature_config.ABS_TOL <= 0 or quadrature_config.REL_TOL <= 0:
        issues.append("Quadrature tolerances must be positive")

    if quadrature_config.MAX_SUBDIVISIONS < 1:
        issues.append("PFS_QUAD_MAX_SUBDIVISIONS must be at least 1")

    if quadrature_config.TAIL_TRANSFORM not in ('exp_substitution', 'truncate_at'):
        issues.append(f"Unknown tail transform: {quadrature_config.TAIL_TRANSFORM}")

    if analytic_config.EXTENDED_PRECISION_THRESHOLD >= analytic_config.ILL_CONDITION_THRESHOLD:
        issues.append("Extended-precision threshold should be below the ill-conditioning threshold")

    unknown_formats = set(export_config.FORMATS) - {'csv', 'pretty'}
    if unknown_formats or 'csv' not in export_config.FORMATS:
        issues.append(f"EXPORT_FORMATS must include csv and only csv/pretty, got {export_config.FORMATS}")

    if not DEFAULT_MCS_TABLE.exists():
        issues.append(f"Default MCS table missing: {DEFAULT_MCS_TABLE}")

    return issues


def print_configuration(console=None):
    """Print current configuration"""
    if console is None:
        from rich.console import Console
        console = Console()

    console.print("\n" + "=" * 60)
    console.print("PFS THROUGHPUT ORACLE - CONFIGURATION", style="bold cyan")
    console.print("=" * 60)

    console.print("\n[bold]QUADRATURE:[/bold]")
    console.print(f"  Tolerances: abs {quadrature_config.ABS_TOL:g} / rel {quadrature_config.REL_TOL:g}")
    console.print(f"  Max subdivisions: {quadrature_config.MAX_SUBDIVISIONS}")
    console.print(f"  Tail transform: {quadrature_config.TAIL_TRANSFORM}")

    console.print("\n[bold]CLOSED FORM:[/bold]")
    console.print(f"  Extended precision above condition {analytic_config.EXTENDED_PRECISION_THRESHOLD:g}")
    console.print(f"  Quadrature fallback above condition {analytic_config.ILL_CONDITION_THRESHOLD:g}")
    console.print(f"  Term cap: {analytic_config.TERM_CAP:,}")

    console.print("\n[bold]SIMULATOR:[/bold]")
    console.print(f"  Chunk: {simulator_config.CHUNK_SLOTS} slots")
    console.print(f"  Sample cap: {simulator_config.SAMPLE_CAP}")

    console.print("\n[bold]PROCESSING:[/bold]")
    console.print(f"  Worker threads: {oracle_config.THREADS}")
    console.print(f"  Log level: {log_config.LEVEL}")

    issues = validate_configuration()
    if issues:
        console.print("\n[bold yellow]WARNINGS:[/bold yellow]")
        for issue in issues:
            console.print(f"  {issue}")

    console.print("\n" + "=" * 60 + "\n")
