//! d-dimensional constructions: tree covers, separators, fault-tolerant
//! spanners, the multi-level robust assembly, the hardy composition, and
//! the grid.

pub mod cover;
pub mod grid;
pub mod hardy;
pub mod robust;
pub mod wspd;
