pub mod error;
pub mod experiment;
pub mod functor;
pub mod hilbert;
pub mod idempotent;
pub mod kernel;
pub mod martingale;
pub mod prob;
pub mod sample;
pub mod scalar;
pub mod topology;

pub use error::{Error, Result};
pub use idempotent::{
    cond_exp_kernel, eqcondorder_witnesses, galois_roundtrips, idem_leq, inf_idempotents,
    invariant_partition, is_idempotent, split, sup_idempotents, GaloisReport, IdempotentKernel,
    OrderWitnesses, Splitting,
};
pub use kernel::{coarsening_kernel, compose, Coarsening, Coupling, Kernel};
pub use prob::{Exponent, Partition, ProbSpace, RandomVar, VNorm, VecRandomVar};
pub use scalar::{NumericMode, Rational, Scalar};
