"""Density-operator quantum mechanics on finite-dimensional Hilbert spaces.

States are unit-trace positive Hermitian matrices, pure or mixed.
The package provides spectral decomposition, measurement statistics,
tomography, unitary dynamics, model systems on 1-D grids, ensemble sampling
with homogeneity tests, and a CLI that runs end-to-end demonstrations.
"""

from . import exceptions
from .demos import DEMOS, DemoConfig, DemoReport, run_demo
from .density import *  # noqa: F401,F403
from .density import __all__ as _density_all
from .dynamics import *  # noqa: F401,F403
from .dynamics import __all__ as _dynamics_all
from .ensembles import *  # noqa: F401,F403
from .ensembles import __all__ as _ensembles_all
from .exceptions import *  # noqa: F401,F403
from .measurement import *  # noqa: F401,F403
from .measurement import __all__ as _measurement_all
from .models import *  # noqa: F401,F403
from .models import __all__ as _models_all
from .operators import *  # noqa: F401,F403
from .operators import __all__ as _operators_all

__version__ = "0.1.0"

__all__ = (
    _operators_all
    + _density_all
    + _measurement_all
    + _models_all
    + _dynamics_all
    + _ensembles_all
    + ["DEMOS", "DemoConfig", "DemoReport", "run_demo", "exceptions"]
)
