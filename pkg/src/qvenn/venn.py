"""
Entropy calculus over labeled registers.

Every quantity is assembled from marginal entropies ``S(X)`` of label unions,
never from a closed form specific to the quantity, so identities such as the
chain rule are genuine cross-checks of the marginal machinery.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

from .errors import AddressingError, OverlapError
from .registers import State, _as_labels, spectrum_entropy, subset_spectrum

#: Equality tolerance for differences of entropies.
DERIVED_TOL = 1e-8
#: Slack for inequalities that hold exactly (subadditivity and friends).
INEQ_SLACK = 1e-9

Labels = str | Iterable[str]


def _groups(*groups: Labels) -> list[frozenset[str]]:
    sets = [frozenset(_as_labels(g)) for g in groups]
    for s in sets:
        if not s:
            raise AddressingError("label sets must be nonempty")
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if a & b:
                raise OverlapError(f"label sets overlap on {sorted(a & b)}")
    return sets


def subset_entropy(state: State, subset: Labels) -> float:
    """Von Neumann entropy of the marginal on ``subset`` in bits."""
    return spectrum_entropy(subset_spectrum(state, subset))


def _s(state: State, *groups: frozenset[str]) -> float:
    return subset_entropy(state, frozenset().union(*groups))


def conditional_entropy(state: State, a: Labels, b: Labels) -> float:
    """S(A|B) = S(AB) - S(B). Negative values signal entanglement."""
    a, b = _groups(a, b)
    return _s(state, a, b) - _s(state, b)


def mutual_entropy(state: State, a: Labels, b: Labels) -> float:
    """S(A:B) = S(A) + S(B) - S(AB)."""
    a, b = _groups(a, b)
    return _s(state, a) + _s(state, b) - _s(state, a, b)


def conditional_mutual_entropy(state: State, a: Labels, b: Labels, given: Labels) -> float:
    """S(A:B|C) = S(AC) + S(BC) - S(C) - S(ABC)."""
    a, b, c = _groups(a, b, given)
    return _s(state, a, c) + _s(state, b, c) - _s(state, c) - _s(state, a, b, c)


def ternary_mutual_entropy(state: State, a: Labels, b: Labels, c: Labels) -> float:
    """S(A:B:C) = S(A:B) - S(A:B|C), written as the inclusion-exclusion sum."""
    a, b, c = _groups(a, b, c)
    return (
        _s(state, a) + _s(state, b) + _s(state, c)
        - _s(state, a, b) - _s(state, a, c) - _s(state, b, c)
        + _s(state, a, b, c)
    )


def chain_rule_residual(state: State, x: Labels, y: Labels, z: Labels) -> float:
    """S(X:YZ) - S(X:Y) - S(X:Z|Y); zero for every state."""
    x, y, z = _groups(x, y, z)
    return (
        mutual_entropy(state, x, y | z)
        - mutual_entropy(state, x, y)
        - conditional_mutual_entropy(state, x, z, y)
    )


@dataclass(frozen=True)
class VennDiagram3:
    """Seven signed regions of a tripartite entropy diagram, in bits."""

    exclusive_x: float
    exclusive_y: float
    exclusive_z: float
    pair_xy_given_z: float
    pair_xz_given_y: float
    pair_yz_given_x: float
    center: float
    labels: tuple[str, str, str]
    joint_entropy: float

    @property
    def total(self) -> float:
        return (
            self.exclusive_x + self.exclusive_y + self.exclusive_z
            + self.pair_xy_given_z + self.pair_xz_given_y + self.pair_yz_given_x
            + self.center
        )

    def check(self) -> list[str]:
        """Names of violated diagram invariants (empty when consistent)."""
        broken = []
        if abs(self.total - self.joint_entropy) > DERIVED_TOL:
            broken.append("regions do not sum to the joint entropy")
        for name in ("pair_xy_given_z", "pair_xz_given_y", "pair_yz_given_x"):
            if getattr(self, name) < -INEQ_SLACK:
                broken.append(f"{name} is negative (strong subadditivity)")
        if abs(self.joint_entropy) <= DERIVED_TOL and abs(self.center) > DERIVED_TOL:
            broken.append("pure joint state with nonzero center")
        return broken

    def to_json(self) -> dict:
        data = asdict(self)
        data["labels"] = list(self.labels)
        return data

    def render(self) -> str:
        x, y, z = self.labels
        rows = [
            f"S({x}|{y}{z})".ljust(14) + f"{self.exclusive_x: .6f}",
            f"S({y}|{x}{z})".ljust(14) + f"{self.exclusive_y: .6f}",
            f"S({z}|{x}{y})".ljust(14) + f"{self.exclusive_z: .6f}",
            f"S({x}:{y}|{z})".ljust(14) + f"{self.pair_xy_given_z: .6f}",
            f"S({x}:{z}|{y})".ljust(14) + f"{self.pair_xz_given_y: .6f}",
            f"S({y}:{z}|{x})".ljust(14) + f"{self.pair_yz_given_x: .6f}",
            f"S({x}:{y}:{z})".ljust(14) + f"{self.center: .6f}",
            f"S({x}{y}{z})".ljust(14) + f"{self.joint_entropy: .6f}",
        ]
        return "\n".join(rows)


def _name(group: frozenset[str]) -> str:
    return "".join(sorted(group))


def venn3(state: State, x: Labels, y: Labels, z: Labels) -> VennDiagram3:
    """Tripartite entropy diagram from the seven joint entropies."""
    gx, gy, gz = _groups(x, y, z)
    sx, sy, sz = _s(state, gx), _s(state, gy), _s(state, gz)
    sxy, sxz, syz = _s(state, gx, gy), _s(state, gx, gz), _s(state, gy, gz)
    sxyz = _s(state, gx, gy, gz)
    return VennDiagram3(
        exclusive_x=sxyz - syz,
        exclusive_y=sxyz - sxz,
        exclusive_z=sxyz - sxy,
        pair_xy_given_z=sxz + syz - sz - sxyz,
        pair_xz_given_y=sxy + syz - sy - sxyz,
        pair_yz_given_x=sxy + sxz - sx - sxyz,
        center=sx + sy + sz - sxy - sxz - syz + sxyz,
        labels=(_name(gx), _name(gy), _name(gz)),
        joint_entropy=sxyz,
    )
