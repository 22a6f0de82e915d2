//! Exact certificates for the finite computations in birational rigidity
//! proofs for Fano hypersurfaces of index two.

pub mod arith;
pub mod catalog;
pub mod chains;
pub mod lpsolve;
pub mod optimize;
pub mod resgraph;
pub mod rfunc;
pub mod sysmodel;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    pub struct Arithmetic;
    #[doc = include_str!("../../../book/src/systems.md")]
    pub struct Systems;
    #[doc = include_str!("../../../book/src/certificates.md")]
    pub struct Certificates;
    #[doc = include_str!("../../../book/src/thresholds.md")]
    pub struct Thresholds;
    #[doc = include_str!("../../../book/src/minimization.md")]
    pub struct Minimization;
    #[doc = include_str!("../../../book/src/chains.md")]
    pub struct Chains;
    #[doc = include_str!("../../../book/src/graphs.md")]
    pub struct Graphs;
    #[doc = include_str!("../../../book/src/catalog.md")]
    pub struct Catalog;
}
