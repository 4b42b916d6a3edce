# config.py
from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    PROJECT_NAME: str = "hktbrane"
    LOG_LEVEL: str = "INFO"
    OUTPUT_DIR: str = "reports"

    # Finite differences
    FD_STEP: float = 1e-4
    CURVATURE_STEP: float = 1e-3
    EOM_STEP: float = 1e-3
    EOM_ORDER_STEP: float = 5e-2
    EOM_ORDER_FLOOR: float = 1e-7
    RICHARDSON: bool = False

    # Sampling
    SEED: int = 0
    SAMPLES: int = 50
    CURVATURE_SAMPLES: int = 20
    CHART_BOX: float = 2.0
    CLEARANCE_FACTOR: float = 10.0
    SAMPLE_CLEARANCE: float = 1.0

    # Parallel transport
    TRANSPORT_SUBSTEPS: int = 20

    # Grassmannian optimizer
    RESTARTS: int = 200
    OPT_ITERATIONS: int = 500
    OPT_INITIAL_STEP: float = 0.1
    OPT_TOLERANCE: float = 1e-10
    DEDUP_ANGLE: float = 1e-3
    COMASS_SAMPLES: int = 100000

    # Contact-set dimension estimate
    CONTACT_MIN_MAXIMIZERS: int = 30
    CONTACT_ANCHORS: int = 5
    CONTACT_NEIGHBOURS: int = 24
    CONTACT_RADIUS: float = 0.02
    CONTACT_RANK_THRESHOLD: float = 0.1

    # Flux quadrature
    QUADRATURE_RESOLUTION: int = 8

    # Worker threads; results never depend on it
    NUM_THREADS: int = 1

    class Config:
        env_file = ".env"

settings = Settings()
