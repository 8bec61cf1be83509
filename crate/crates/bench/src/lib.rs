//! Fixtures shared by the benchmarks.

use modcurve_core::zmod::intermediate_unit_subgroups;
use modcurve_core::SubgroupSpec;

/// `B_Δ(q)` for every intermediate `Δ` modulo `q`.
pub fn intermediate_borels(q: u32) -> Vec<SubgroupSpec> {
    intermediate_unit_subgroups(q)
        .iter()
        .map(|d| SubgroupSpec::borel(q, d).expect("Δ is taken modulo q"))
        .collect()
}

/// The Cartan normalizer mod `ℓ` lifted to `ℓ²`.
pub fn lifted_cartan(ell: u32) -> SubgroupSpec {
    SubgroupSpec::nonsplit_cartan_normalizer(ell)
        .and_then(|c| c.lift(ell * ell))
        .expect("ℓ is an odd prime")
}
