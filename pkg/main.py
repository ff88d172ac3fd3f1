from bellprocess.config import set_config
from bellprocess.models import build_two_level
from bellprocess.process import SamplerConfig, sample_ensemble
from bellprocess.verify import EnsembleStats
import dotenv

# Load environment variables from a .env file
dotenv.load_dotenv()

# Tighter root finding than the default
set_config({"root_tol": 1e-11})

# Rabi oscillation: the process starts in state 1 and must leave before the node at pi/2
system = build_two_level(omega=1.0)
cfg = SamplerConfig(seed=7)
trajectories = sample_ensemble(system, 2000, cfg, horizon=1.5, progress=True)

stats = EnsembleStats.from_trajectories(trajectories, [0.5, 1.0, 1.5], system.D)
for t, rho in zip(stats.times, stats.rho_hat):
    print(f"t={t:.2f}  empirical={rho}  |psi_t|^2={system.measure(t)}")
print("statuses:", stats.statuses)
