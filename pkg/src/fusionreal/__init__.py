"""Exact computation with fusion systems on small p-groups.

The package closes arbitrary (not necessarily saturated) fusion systems on a
finite p-group S, constructs a left semicharacteristic biset for the system
through rational stabilization over S x S, and verifies that the fusion
induced by the group of right-equivariant bijections of that biset recovers
the system exactly, morphism by morphism, without ever enumerating the group.
All arithmetic is exact (integer tables, rational coefficients).
"""

from .errors import (DomainError, FusionRealError, HNotClosed,
                     InvalidGenerator, InvalidMorphism, NotABiset, NotAGroup,
                     NotAPGroup, NotBifree, ParseError, PreconditionViolated,
                     TooLarge, UnknownCatalogEntry)
from .groups import (DirectSquare, FiniteGroup, GroupMap, Subgroup,
                     SubgroupLattice, all_subgroups, direct_square, lattice,
                     monomorphisms, normalizer, parse_group,
                     prime_power_decomposition)
from .fusion import (FusionSystem, close_fusion, closure_violations,
                     f_classes, fusion_class_partition, fusion_of_subgroup,
                     inner_fusion, out_reps, parse_fusion_generators,
                     product_conjugate, product_fusion_classes)
from .bisets import (ExplicitBiset, TwistedDiagonal, VirtualGSet,
                     as_twisted_diagonal, clear_denominators,
                     contains_identity_orbit, fixed_count, is_f_generated,
                     is_left_stable, is_right_stable, materialize,
                     orbit_class, serialize_virtual, stabilize,
                     twisted_diagonal)
from .realize import (RealizationReport, SemicharBiset, build_semichar,
                      decide_morphism, find_intertwiner, induced_fusion,
                      rank_and_order, verify_realization)
from .catalog import CatalogEntry, catalog, get_entry

__version__ = "0.1.0"
