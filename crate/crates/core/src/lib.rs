//! Exact Bredon homology of finite simplicial G-sets.
//!
//! The library computes equivariant homology of finite pointed simplicial
//! G-sets with coefficients in a covariant coefficient system (a functor from
//! the orbit category of G to free modules) or a Mackey functor. All
//! arithmetic is exact: arbitrary-precision integers, rationals, or a prime
//! field. The pieces, bottom to top:
//!
//! * [`group`]: finite groups as Cayley tables, subgroups, cosets.
//! * [`orbit`]: the orbit category O(G) with canonicalized morphisms.
//! * [`coeff`]: coefficient systems and Mackey functors as matrix tables.
//! * [`gset`]: finite pointed G-sets and equivariant maps.
//! * [`fgroup`]: the modules F(S,M) and F^G(S,M) with ι, β, α.
//! * [`simplicial`]: finite pointed simplicial G-sets and builders.
//! * [`homology`]: the equivariant chain complex and exact homology.
//! * [`transfer`]: transfers for n-fold G-coverings and the axiom checker.
//! * [`oracle`]: an independent nonequivariant homology cross-check.

pub mod coeff;
pub mod fgroup;
pub mod group;
pub mod gset;
pub mod homology;
pub mod matrix;
pub mod oracle;
pub mod orbit;
pub mod ring;
pub mod simplicial;
pub mod transfer;

pub use coeff::{CoefficientSystem, MackeyFunctor};
pub use group::{Group, Subgroup};
pub use gset::{GSet, PointedGMap, PointedGSet};
pub use homology::{ChainComplex, HomologyResult};
pub use matrix::{smith_normal_form, Mat, SmithNormalForm};
pub use orbit::{OrbitCategory, OrbitMorphism, SubgroupId};
pub use ring::{Ring, Scalar};
pub use simplicial::{FormalSimplex, SimplicialGMap, SimplicialGSet};
pub use transfer::{
    check_axioms, transfer_chain_map, AxiomReport, CoveringSpec, GCovering, GMap,
    SimplicialGCovering, Transfer,
};

/// Maps a batch of independent work items, on the rayon pool when the
/// `parallel` feature is enabled and sequentially otherwise.
pub(crate) mod par {
    #[cfg(feature = "parallel")]
    pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
    where
        T: Send,
        U: Send,
        F: Fn(T) -> U + Sync + Send,
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }

    #[cfg(not(feature = "parallel"))]
    pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
    where
        F: Fn(T) -> U,
    {
        items.into_iter().map(f).collect()
    }
}
