"""Family-agnostic entry points over the ep2 and ep3 solvers."""

from dualep.families import ep2
from dualep.families import ep3
from dualep.families.models import Ep2Config
from dualep.families.models import Ep2Derived
from dualep.families.models import Ep3Config
from dualep.families.models import Ep3Derived
from dualep.families.models import Family
from dualep.linalg.kernel import CMat
from dualep.linalg.kernel import RMat

type Derived = Ep2Derived | Ep3Derived


def make_config(family: Family | str, phi_big: float, delta: float = 0.0) -> Ep2Config | Ep3Config:
    """
    Validated configuration for ``family``.

    Raises:
        InadmissibleParameterError: If ``Φ`` is outside the family's window
        ValueError: If ``family`` is unknown
    """
    if Family(family) is Family.EP2:
        return Ep2Config(phi_big=phi_big, delta=delta)
    return Ep3Config(phi_big=phi_big, delta=delta)


def solve_family(family: Family | str, phi_big: float, delta: float = 0.0) -> Derived:
    cfg = make_config(family, phi_big, delta)
    if isinstance(cfg, Ep2Config):
        return ep2.solve_ep2(cfg)
    return ep3.solve_ep3(cfg)


def family_gate(d: Derived) -> CMat:
    if isinstance(d, Ep2Derived):
        return ep2.ep2_gate(d)
    return ep3.ep3_gate(d)


def closed_form_matrix(d: Derived) -> RMat:
    if isinstance(d, Ep2Derived):
        return ep2.closed_form_matrix(d)
    return ep3.closed_form_matrix(d)
