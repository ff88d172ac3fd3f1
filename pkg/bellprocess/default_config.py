import os

DEFAULT_CONFIG = {
    "results_dir": os.getenv("BPL_RESULTS_DIR", "./results"),
    "log_level": os.getenv("BPL_LOG", "WARNING"),
    # Units and numerical thresholds
    "hbar": 1.0,
    "node_eps": 1e-12,
    "dimension_cap": 4096,
    # Sampler settings
    "hazard_cap": 50.0,
    "max_jumps": 1_000_000,
    "quad_tol": 1e-9,
    "root_tol": 1e-10,
    "hazard_step": 0.05,
    # Verification settings
    "mc_sigmas": 3.0,
    "retry_factor": 4,
    "jobs": None,
}
