MISMATCHED_CONFIGS = 'reports come from different problem families: {digests}'
NO_BRACKET = (
    'lambda levels {low:.6g} and {high:.6g} do not bracket the verdict change '
    '({low_verdict} -> {high_verdict})'
)


class ComparisonError(ValueError):
    ...
