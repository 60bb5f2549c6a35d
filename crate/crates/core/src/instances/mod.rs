//! Concrete carriers.

mod einstein;
mod integers;
mod mobius;
mod table;

pub use einstein::{EinsteinBall, EinsteinVec};
pub use integers::Integers;
pub use mobius::{
    association_gap, mobius_add, mobius_gyr, mobius_nonassociativity_witness, AssociationGap,
    MobiusDisk, MobiusPoint, DISK_SAMPLE_CAP,
};
pub use table::{
    check_subgyrogroup, coset_decompose, lsub_check, validate_table, CosetPartition, TableFile,
    TableGyro, TableValidation,
};
