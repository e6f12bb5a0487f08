"""
Centralna konfiguracja systemu mwalk (błądzenia multiplikatywne, stałe L1)
"""

import os

from dotenv import load_dotenv

load_dotenv()

TOOL_VERSION = "mwalk 1.0.0"

# Równoległość - jedyne wejście ze zmiennych środowiskowych
PARALLEL_CONFIG = {
    "workers": max(1, int(os.getenv("MWALK_WORKERS", "1"))),
    "chunk_size": 8192,          # Stały rozmiar kawałka ścieżek, niezależny od liczby wątków
}

# Rozkłady
DISTRIBUTION_CONFIG = {
    "prob_sum_tol": 1e-12,
    "mean_tol": 1e-9,
    "degenerate_mu_tol": 1e-15,
    "mc_moment_samples": 10**6,  # Domyślna liczba próbek dla rozkładów typu sampler
    "mc_moment_seed": 0,
    "mean_z_threshold": 5.0,     # Próg z-score dla testu średniej = 1
    "quantile_levels": 20,       # Siatka kwantyli 1 - 2^-j, j=1..20
}

# Certyfikaty
CERTIFICATE_CONFIG = {
    "k_max": 10**6,
    "ledger_head": 16,           # Ile początkowych c_i trafia do raportu
    "mp_dps": 60,                # Precyzja mpmath przy sprawdzaniu k
    "eps_match_rtol": 1e-12,
}

# Ewaluator
EVALUATOR_CONFIG = {
    "enumeration_budget": 10**7,
    "ci_z": 2.576,               # 99% przedział ufności
    "min_samples": 100,
    "rademacher_max_n": 20,
    "default_samples": 10**5,   # evaluate_ratio bez podanego samples
}

# Lematy
SUITE_CONFIG = {
    "max_states": 4096,          # Limit stanów na jedną instancję lematu
    "max_n": 6,
    "tol": 1e-12,
    "report_violations": 10,
}

# Produkty Riesza
RIESZ_CONFIG = {
    "points_per_harmonic": 64,
    "max_grid": 2**28,
    "block_size": 2**20,
    "denominator_floor": 1e-3,
    "histogram_bins": 20,
    "cross_model_gap": 0.05,     # Tylko raportowane, nie asercja
    "cross_model_samples": 10**5,
}

# Wyszukiwanie adwersarialne
SEARCH_CONFIG = {
    "initial_step": 0.25,
    "step_floor": 1e-6,
    "mc_samples": 4096,
    "probe_restarts": 4,
}

# Output
OUTPUT_CONFIG = {
    "output_dir": "output",
    "schema_file": "report_schema.json",
}

# Logowanie
LOGGING_CONFIG = {
    "level": "INFO",
    "format": "%(asctime)s - %(levelname)s - %(message)s",
    "log_file": "mwalk.log",
}
