from adhm_lab import DimVector, generate_stable

SMALL_DIMS = [(1, 1, 1), (1, 2, 1), (1, 3, 1), (2, 2, 1), (2, 3, 1), (3, 2, 1)]


def stable(dims, seed=0, style="lifted"):
    return generate_stable(DimVector(*dims), seed, style)

# filled by the acceptance tests, printed by the terminal-summary hook
ACCEPTANCE_LINES = []
