class Config:
    """Model defaults shared by the services and commands."""
    TOOL_VERSION = '1.0.0'

    # arch / costmodel
    DEFAULT_CLOCK_HZ = 200_000_000
    DEFAULT_OVERHEAD_FACTOR = 1.1
    PSUM_BITS = 32

    # dataflow oracle
    ORACLE_MAC_GUARD = 10_000_000
    ORACLE_COLLISION_LIMIT = 200_000  # per-PE cycle collision check only below this

    # dse
    GRID_CAP = 1_000_000
    EXPLORE_WORKERS = 1

    # regression
    CV_FOLDS = 5
    MAX_DEGREE = 3
    CV_SEED = 0
    RIDGE_PENALTY = 1e-8
    CV_TIE_RTOL = 1e-6

    # bundled data (ppa_explorer/data)
    COST_TABLE_FILE = 'cost_table_45nm.json'
    GRID_FILE = 'default_grid.json'
    ARCH_FILE = 'default_arch.json'
