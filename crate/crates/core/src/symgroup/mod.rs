//! Symmetric-group machinery: permutations, conjugacy classes, character
//! tables and projection operators.

mod classes;
mod perm;
mod table;

pub use classes::{conjugacy_classes, partitions, ConjugacyClass, CycleType};
pub use perm::{compose, Permutation};
pub use table::{
    character_table, rational_identity, rational_matmul, CharacterTable, ClassInfo, IrrepId, Rational, TableViolation,
};
