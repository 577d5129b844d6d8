//! Finite groups as dense multiplication tables, permutations, wreath
//! products, and homomorphism enumeration.

mod finite;
mod homs;
mod perm;
mod view;
mod wreath;

pub use finite::{group_from_generators, ConjClasses, FiniteGroup};
pub use homs::{
    class_convolve, comm_class_distribution, commuting_p_power_tuples, count_homs_backtracking,
    enumerate_homs, eval_word, hom_classes, hom_count, hom_count_times_z, is_hom,
    relator_count_distribution, square_class_distribution, GroupHom, RelatorShape,
};
pub use perm::{factorial, Permutation};
pub use view::{GroupOps, MemberClasses, Members, View};
pub use wreath::{wreath_product, WreathCodec};
