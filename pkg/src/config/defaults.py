# Every key a problem file may set. Files and --set overrides are merged over this table
# and the merged result is written next to each report as the effective config.

CONSTANT_POTENTIAL = {
    'family': 'constant',
    'base_level': 1.0,
    'modulation_amplitude': 0.0,
    'perturbation_amplitude': 0.0,
    'perturbation_rate': 1.0,
    'perturbation_profile': 'exp',
    'ball_radius': 0.0,
    'ball_floor': 0.0,
}

DEFAULT_CONFIG: dict = {
    'problem': {
        'p': 2.0,
        'q': 3.0,
        'alpha': 1.0,
        'beta': 1.5,
        'effective_dimension': 4.0,
    },
    'grid': {
        'dimension': 1,
        'half_width': 16.0,
        'nodes_per_axis': 512,
        'center': 0.0,
    },
    'potential': {
        'a': dict(CONSTANT_POTENTIAL),
        'b': dict(CONSTANT_POTENTIAL),
        'lambda': dict(CONSTANT_POTENTIAL, base_level=0.3, ball_radius=2.0),
    },
    'nonlinearity': {
        'f': {'family': 'log-power', 'gamma': 1.0, 'power': 3.0, 'table': []},
        'g': {'family': 'log-power', 'gamma': 1.0, 'power': 4.0, 'table': []},
    },
    'asymptotic': {
        'profile': 'exp',
        'rate': 1.0,
        'a_amplitude': -0.2,
        'b_amplitude': -0.2,
        'lambda_amplitude': 0.1,
    },
    'solver': {
        'tol': 1e-6,
        'max_iters': 5000,
        'multistart': 8,
        'seed': 42,
        'armijo': 1e-4,
        'max_halvings': 40,
        'initial_step': 0.1,
        'max_step': 1e3,
        'energy_slack': 1e-12,
        'blowup_energy': -1e12,
        'reg_eps': 1e-8,
    },
    'verify': {
        'n_samples': 50,
        'positivity_tol': 1e-10,
        'lambda_threshold_max': 0.6,
        'threshold_steps': 6,
        'semitrivial_slack': 1e-8,
        'mass_fraction': 1e-6,
        'norm_floor': 1e-4,
        'solve_starts': 1,
    },
}
