"""Integer invariants of compact attached curves: Maslov indices, the doubled
self-intersection number, surgery moves and the adjunction check.

A configuration records genus g, boundary circle count sigma, boundary and
interior double points, total interior cusp index, the normal Maslov index
and the self-intersection of the double.  The total Maslov index is slaved to

    maslov_total = normal_maslov + 4 - 4g - 2 sigma,

the sum of the normal part and the tangent part 2 chi.  The adjunction
identity compares

    2g + sigma   ==   (double_sq - maslov_total)/2 + 2
                      - delta_b - 2 delta_i - 2 kappa_i.

Three moves transport a configuration toward the embedded case and preserve
the identity:

* a cusp of index k trades for k interior nodes (perturbation away from the
  boundary; no Maslov or homology data changes);
* an interior node trades for a handle (genus +1, normal Maslov +4, total
  Maslov and double_sq unchanged);
* a boundary node is resolved by the half-hyperbola surgery (double_sq and
  total Maslov unchanged by homology/Maslov-class invariance; the parametrized
  curve loses one Euler characteristic, so 2g + sigma grows by one and the
  normal Maslov absorbs +2).

The consistency relation preserved by every move, and reducing to the
doubled-self-intersection formula double_sq = normal_maslov + 4 delta_i for
immersed curves with embedded boundary, is

    double_sq == normal_maslov + 4 (delta_i + kappa_i) + 2 delta_b.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


class InconsistentConfig(ValueError):
    pass


@dataclass(frozen=True)
class SectionZeroData:
    interior_zeros: tuple
    boundary_zeros: tuple

    def __post_init__(self):
        if not all(s in (-1, 1) for s in self.interior_zeros):
            raise ValueError("interior zeros must be signs +-1")
        if not all(s in (-1, 1) for s in self.boundary_zeros):
            raise ValueError("boundary zeros must be signs +-1")


def maslov_from_zeros(z: SectionZeroData) -> int:
    """Twice the signed interior zero count plus the signed boundary count."""
    return 2 * sum(z.interior_zeros) + sum(z.boundary_zeros)


def maslov_tangent(g: int, sigma: int) -> int:
    """Tangent-pair index 2 chi = 4 - 4g - 2 sigma."""
    if g < 0 or sigma < 1:
        raise ValueError("need genus >= 0 and at least one boundary circle")
    return 4 - 4 * g - 2 * sigma


def maslov_sum(m1: int, m2: int) -> int:
    return m1 + m2


def doubled_chern_count(z: SectionZeroData) -> int:
    """Chern number of the doubled section: interior zeros mirror, boundary
    zeros stay single."""
    return sum(z.interior_zeros) * 2 + sum(z.boundary_zeros)


@dataclass(frozen=True)
class CurveConfig:
    g: int
    sigma: int
    delta_b: int = 0
    delta_i: int = 0
    kappa_i: int = 0
    normal_maslov: int = 0
    double_sq: int = 0

    def __post_init__(self):
        if self.g < 0 or self.sigma < 1:
            raise InconsistentConfig("need g >= 0 and sigma >= 1")
        if min(self.delta_b, self.delta_i, self.kappa_i) < 0:
            raise InconsistentConfig("singularity counts must be >= 0")

    @property
    def maslov_total(self) -> int:
        return self.normal_maslov + maslov_tangent(self.g, self.sigma)

    @property
    def euler_char_image(self) -> int:
        """chi of the image: chi of the parametrizing curve minus boundary
        identifications."""
        return 2 - 2 * self.g - self.sigma - self.delta_b

    def double_consistent(self) -> bool:
        """The doubled-self-intersection relation, extended to singular
        configurations (equals the embedded-boundary immersed formula
        double_sq = normal_maslov + 4 delta_i when kappa_i = delta_b = 0)."""
        return self.double_sq == (self.normal_maslov
                                  + 4 * (self.delta_i + self.kappa_i)
                                  + 2 * self.delta_b)

    @property
    def embedded(self) -> bool:
        return self.delta_b == self.delta_i == self.kappa_i == 0


@dataclass(frozen=True)
class AdjunctionVerdict:
    lhs: int
    rhs: int
    equal: bool
    gap: int

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs,
                "verdict": "equal" if self.equal else "unequal",
                "gap": self.gap}


def check_adjunction(cfg: CurveConfig) -> AdjunctionVerdict:
    """Evaluate both sides of the adjunction identity."""
    if (cfg.double_sq - cfg.maslov_total) % 2 != 0:
        raise InconsistentConfig(
            "inconsistent configuration: double_sq - maslov_total is odd")
    lhs = 2 * cfg.g + cfg.sigma
    rhs = ((cfg.double_sq - cfg.maslov_total) // 2 + 2
           - cfg.delta_b - 2 * cfg.delta_i - 2 * cfg.kappa_i)
    return AdjunctionVerdict(lhs=lhs, rhs=rhs, equal=(lhs == rhs),
                             gap=abs(lhs - rhs))


def embedded_seed(g: int, sigma: int, normal_maslov: int) -> CurveConfig:
    """Embedded configuration; satisfies the adjunction identity for every
    normal Maslov index."""
    return CurveConfig(g=g, sigma=sigma, normal_maslov=normal_maslov,
                       double_sq=normal_maslov)


# -- moves ---------------------------------------------------------------------

def move_cusp_to_nodes(cfg: CurveConfig, k: int) -> CurveConfig:
    """Trade cusp index k for k interior nodes; Maslov data and double_sq
    stay put."""
    if k < 0 or cfg.kappa_i < k:
        raise InconsistentConfig(f"insufficient cusp index for k = {k}")
    return replace(cfg, kappa_i=cfg.kappa_i - k, delta_i=cfg.delta_i + k)


def move_node_to_handle(cfg: CurveConfig) -> CurveConfig:
    """Replace one interior node by a handle: g + 1, normal Maslov + 4;
    the tangent part drops by 4, so the total Maslov and double_sq persist."""
    if cfg.delta_i < 1:
        raise InconsistentConfig("no interior node to trade")
    return replace(cfg, delta_i=cfg.delta_i - 1, g=cfg.g + 1,
                   normal_maslov=cfg.normal_maslov + 4)


def move_boundary_surgery(cfg: CurveConfig, variant: str = "split") -> CurveConfig:
    """Resolve one boundary node by the half-hyperbola replacement.

    The image retracts to itself, so chi(image) = 2 - 2g - sigma - delta_b is
    preserved while the parametrized curve loses one Euler characteristic;
    whether that splits a boundary circle (variant "split": sigma + 1) or
    closes a handle between two circles (variant "merge": g + 1, sigma - 1)
    depends on how the two branches sit on the boundary, which the integer
    record cannot see.  Total Maslov index and double_sq are invariant, so the
    normal Maslov absorbs the tangent shift +2 either way.
    """
    if cfg.delta_b < 1:
        raise InconsistentConfig("no boundary node to resolve")
    if variant == "split":
        out = replace(cfg, delta_b=cfg.delta_b - 1, sigma=cfg.sigma + 1,
                      normal_maslov=cfg.normal_maslov + 2)
    elif variant == "merge":
        if cfg.sigma < 2:
            raise InconsistentConfig("merge variant needs two boundary circles")
        out = replace(cfg, delta_b=cfg.delta_b - 1, sigma=cfg.sigma - 1,
                      g=cfg.g + 1, normal_maslov=cfg.normal_maslov + 2)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return out


def inverse_moves(cfg: CurveConfig, rng) -> CurveConfig:
    """One random inverse move: grow a singular configuration from cfg while
    preserving the adjunction identity and the doubled-intersection relation."""
    choices = ["nodes_to_cusp", "handle_to_node", "boundary_node"]
    kind = rng.choice(choices)
    if kind == "nodes_to_cusp" and cfg.delta_i >= 1:
        k = int(rng.integers(1, cfg.delta_i + 1))
        return replace(cfg, delta_i=cfg.delta_i - k, kappa_i=cfg.kappa_i + k)
    if kind == "handle_to_node" and cfg.g >= 1:
        return replace(cfg, g=cfg.g - 1, delta_i=cfg.delta_i + 1,
                       normal_maslov=cfg.normal_maslov - 4)
    if kind == "boundary_node":
        if cfg.sigma >= 2 and rng.integers(0, 2):
            # undo a "split" surgery
            return replace(cfg, sigma=cfg.sigma - 1, delta_b=cfg.delta_b + 1,
                           normal_maslov=cfg.normal_maslov - 2)
        if cfg.g >= 1:
            # undo a "merge" surgery
            return replace(cfg, g=cfg.g - 1, sigma=cfg.sigma + 1,
                           delta_b=cfg.delta_b + 1,
                           normal_maslov=cfg.normal_maslov - 2)
        if cfg.sigma >= 2:
            return replace(cfg, sigma=cfg.sigma - 1, delta_b=cfg.delta_b + 1,
                           normal_maslov=cfg.normal_maslov - 2)
    return cfg


def random_singular_config(rng, max_inverse: int = 6) -> CurveConfig:
    seed = embedded_seed(g=int(rng.integers(0, 3)),
                         sigma=int(rng.integers(1, 4)),
                         normal_maslov=int(rng.integers(-6, 7)))
    cfg = seed
    for _ in range(int(rng.integers(0, max_inverse + 1))):
        cfg = inverse_moves(cfg, rng)
    return cfg


def forward_moves_available(cfg: CurveConfig) -> list:
    out = []
    if cfg.kappa_i >= 1:
        out.append("cusp_to_nodes")
    if cfg.delta_i >= 1:
        out.append("node_to_handle")
    if cfg.delta_b >= 1:
        out.append("boundary_surgery")
    return out


def apply_forward_move(cfg: CurveConfig, name: str, rng) -> CurveConfig:
    if name == "cusp_to_nodes":
        k = int(rng.integers(1, cfg.kappa_i + 1))
        return move_cusp_to_nodes(cfg, k)
    if name == "node_to_handle":
        return move_node_to_handle(cfg)
    if name == "boundary_surgery":
        variant = "merge" if (cfg.sigma >= 2 and rng.integers(0, 2)) else "split"
        return move_boundary_surgery(cfg, variant)
    raise ValueError(name)
