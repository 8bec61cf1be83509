//! Geometry of the modular curve `X_H`: index, elliptic points, cusps and
//! genus from the action of SL₂(ℤ/nℤ) on the cosets of `H ∩ SL₂`.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::coset::{self, CosetTable};
use crate::error::{Error, Result};
use crate::subgroup::{index_via_orbit, SubgroupKind, SubgroupSpec};
use crate::zmod::Mat2;

/// Right cosets of `S = H ∩ SL₂(ℤ/nℤ)` in SL₂(ℤ/nℤ) with the permutations
/// induced by `σ = (0 −1; 1 0)`, `τ = (1 1; 0 1)` and `(0 −1; 1 −1)`.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    pub n: u32,
    pub base: SubgroupSpec,
    pub reps: Vec<Mat2>,
    pub perm_s: Vec<u32>,
    pub perm_t: Vec<u32>,
    pub perm_order_three: Vec<u32>,
}

impl CosetSpace {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Permutation of `στ = (0 −1; 1 1)`: apply σ, then τ.
    pub fn perm_st(&self) -> Vec<u32> {
        self.perm_s
            .iter()
            .map(|&i| self.perm_t[i as usize])
            .collect()
    }

    /// Cusp widths: the cycle lengths of `τ`.
    pub fn cusp_widths(&self) -> Vec<usize> {
        let mut widths: Vec<usize> =
            coset::permutation_orbits(self.len(), std::slice::from_ref(&self.perm_t))
                .iter()
                .map(Vec::len)
                .collect();
        widths.sort_unstable();
        widths
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveData {
    pub mu: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub nu_inf: u64,
    pub genus: u64,
    pub label_prefix: String,
    /// Set when `−I` was adjoined to the input before computing.
    pub adjoined_minus_i: bool,
}

fn sl2_table(h: &SubgroupSpec) -> Result<CosetTable<'_>> {
    let n = h.modulus();
    let gens: Vec<Mat2> = if n == 1 {
        Vec::new()
    } else {
        vec![Mat2::s(n), Mat2::t(n)]
    };
    coset::orbit_of_identity(h, &gens)
}

fn schreier_generators(table: &CosetTable<'_>, perms: &[(Mat2, &[u32])]) -> Vec<Mat2> {
    let reps = table.reps();
    let mut gens: Vec<Mat2> = Vec::new();
    for (i, r) in reps.iter().enumerate() {
        for (g, perm) in perms {
            let j = perm[i] as usize;
            let s = r.mul_unchecked(g).mul_unchecked(&reps[j].inv_unchecked());
            if !s.is_identity() {
                gens.push(s);
            }
        }
    }
    gens.sort_unstable();
    gens.dedup();
    gens
}

fn coset_space_unchecked(h: &SubgroupSpec) -> Result<CosetSpace> {
    let n = h.modulus();
    let table = sl2_table(h)?;
    let perm_s = table.permutation(&Mat2::s(n));
    let perm_t = table.permutation(&Mat2::t(n));
    let perm_order_three = table.permutation(&Mat2::order_three(n));
    let gens = schreier_generators(&table, &[(Mat2::s(n), &perm_s), (Mat2::t(n), &perm_t)]);
    let base = h.sl2_part_with_gens(gens);
    Ok(CosetSpace {
        n,
        base,
        reps: table.reps().to_vec(),
        perm_s,
        perm_t,
        perm_order_three,
    })
}

/// `H ∩ SL₂(ℤ/nℤ)`, with Schreier generators read off the coset space.
pub fn sl2_part(h: &SubgroupSpec) -> Result<SubgroupSpec> {
    let n = h.modulus();
    if let SubgroupKind::Full = h.kind() {
        let gens = if n == 1 {
            Vec::new()
        } else {
            vec![Mat2::s(n), Mat2::t(n)]
        };
        return Ok(h.sl2_part_with_gens(gens));
    }
    Ok(coset_space_unchecked(h)?.base)
}

/// The coset space of `H ∩ SL₂` in SL₂. Requires `det(H)` to be all units.
pub fn coset_space(h: &SubgroupSpec) -> Result<CosetSpace> {
    if !h.has_full_det() {
        return Err(Error::NotFullDeterminant(h.modulus()));
    }
    coset_space_unchecked(h)
}

/// Genus data of `X_H`. Subgroups without `−I` are replaced by `±H`.
pub fn curve_data(h: &SubgroupSpec) -> Result<CurveData> {
    let adjoined_minus_i = !h.contains_minus_i();
    let h = h.adjoin_minus_i();
    let space = coset_space(&h)?;
    let mu = space.len() as u64;
    let nu2 = coset::fixed_points(&space.perm_s) as u64;
    let nu3 = coset::fixed_points(&space.perm_order_three) as u64;
    let nu_inf = coset::cycle_count(&space.perm_t) as u64;
    let twelve_g = (12 + mu) as i64 - (3 * nu2 + 4 * nu3 + 6 * nu_inf) as i64;
    if twelve_g < 0 || twelve_g % 12 != 0 {
        return Err(Error::NonIntegral {
            numerator: twelve_g.unsigned_abs(),
            denominator: 12,
        });
    }
    let genus = (twelve_g / 12) as u64;
    // With full determinant and −I ∈ H, [GL₂ : H] = [SL₂ : H ∩ SL₂] = μ.
    let label_prefix = format!("{}.{}.{}", h.level(), mu, genus);
    Ok(CurveData {
        mu,
        nu2,
        nu3,
        nu_inf,
        genus,
        label_prefix,
        adjoined_minus_i,
    })
}

pub fn genus(h: &SubgroupSpec) -> Result<u64> {
    Ok(curve_data(h)?.genus)
}

/// Degree of `X_{H₁} → X_{H₂}`, i.e. `[H₂ : H₁]`, computed on `±H₁ ≤ ±H₂`.
pub fn map_degree(h1: &SubgroupSpec, h2: &SubgroupSpec) -> Result<u64> {
    h1.is_subgroup_of(h2)?;
    let (h1, h2) = (h1.adjoin_minus_i(), h2.adjoin_minus_i());
    index_via_orbit(&h2, &h1)
}

/// `N.i.g#hash`: level, index in GL₂, genus, and an 8-hex-digit digest of the
/// sorted generator set reduced to the level. The final tiebreak of the
/// standard labels is not computed.
pub fn label_prefix(h: &SubgroupSpec) -> Result<String> {
    let data = curve_data(h)?;
    let h = h.adjoin_minus_i();
    let level = h.level();
    let reduced = h.reduce(level)?;
    let mut gens: Vec<[u32; 4]> = reduced
        .gens()
        .iter()
        .filter(|g| !g.is_identity())
        .map(|g| g.entries())
        .collect();
    gens.sort_unstable();
    gens.dedup();
    let mut hasher = Sha256::new();
    hasher.update(level.to_le_bytes());
    for g in &gens {
        for x in g {
            hasher.update(x.to_le_bytes());
        }
    }
    let digest = hasher.finalize();
    let hex: String = digest[..4].iter().map(|b| format!("{b:02x}")).collect();
    Ok(format!("{}#{}", data.label_prefix, hex))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::{unit_subgroups_containing_minus_one, UnitSubgroup};

    fn borel_with_order(n: u32, order: u64) -> SubgroupSpec {
        let delta = unit_subgroups_containing_minus_one(n)
            .into_iter()
            .find(|d| d.order() == order)
            .unwrap();
        SubgroupSpec::borel(n, &delta).unwrap()
    }

    #[test]
    fn level_one_curve() {
        let d = curve_data(&SubgroupSpec::full(7)).unwrap();
        assert_eq!((d.mu, d.nu2, d.nu3, d.nu_inf, d.genus), (1, 1, 1, 1, 0));
        let d = curve_data(&SubgroupSpec::full(1)).unwrap();
        assert_eq!((d.mu, d.nu2, d.nu3, d.nu_inf, d.genus), (1, 1, 1, 1, 0));
        assert_eq!(d.label_prefix, "1.1.0");
    }

    #[test]
    fn sl2_part_examples() {
        assert_eq!(
            sl2_part(&SubgroupSpec::full(5)).unwrap().order().unwrap(),
            120
        );
        let s = sl2_part(&SubgroupSpec::borel0(5)).unwrap();
        assert_eq!(s.order().unwrap(), 20);
        let closed = crate::subgroup::closure(5, s.gens(), 1000).unwrap();
        assert_eq!(closed.len(), 20);
        assert!(s.contains_minus_i());
    }

    #[test]
    fn coset_space_examples() {
        assert_eq!(coset_space(&SubgroupSpec::full(9)).unwrap().len(), 1);
        assert_eq!(coset_space(&SubgroupSpec::borel0(5)).unwrap().len(), 6);
        assert_eq!(coset_space(&borel_with_order(169, 4)).unwrap().len(), 7098);
        let not_full = SubgroupSpec::generated(5, vec![Mat2::t(5)]).unwrap();
        assert_eq!(
            coset_space(&not_full).unwrap_err(),
            Error::NotFullDeterminant(5)
        );
    }

    #[test]
    fn permutation_sanity() {
        for h in [
            SubgroupSpec::borel0(11),
            SubgroupSpec::borel_pm1(9),
            borel_with_order(25, 4),
        ] {
            let space = coset_space(&h).unwrap();
            let id: Vec<u32> = (0..space.len() as u32).collect();
            let mut p = id.clone();
            for _ in 0..4 {
                p = p.iter().map(|&i| space.perm_s[i as usize]).collect();
            }
            assert_eq!(p, id);
            let st = space.perm_st();
            let mut p = id.clone();
            for _ in 0..6 {
                p = p.iter().map(|&i| st[i as usize]).collect();
            }
            assert_eq!(p, id);
            assert_eq!(space.cusp_widths().iter().sum::<usize>(), space.len());
            // στ and the fixed order-three element have the same fixed points.
            assert_eq!(
                coset::fixed_points(&st),
                coset::fixed_points(&space.perm_order_three)
            );
        }
    }

    #[test]
    fn table_one_genera() {
        for (n, order, genus) in [
            (25u32, 4u64, 4u64),
            (25, 10, 0),
            (27, 6, 1),
            (32, 4, 5),
            (32, 8, 1),
        ] {
            assert_eq!(
                curve_data(&borel_with_order(n, order)).unwrap().genus,
                genus,
                "{n}, {order}"
            );
        }
    }

    #[test]
    fn map_degree_examples() {
        assert_eq!(
            map_degree(&SubgroupSpec::borel_pm1(25), &SubgroupSpec::borel0(25)).unwrap(),
            10
        );
        let h = SubgroupSpec::borel0(7);
        assert_eq!(map_degree(&h, &h).unwrap(), 1);
        let h = borel_with_order(25, 4);
        assert_eq!(map_degree(&h, &SubgroupSpec::full(25)).unwrap(), 150);
        assert!(matches!(
            map_degree(&SubgroupSpec::borel0(25), &SubgroupSpec::borel_pm1(25)),
            Err(Error::NotASubgroup { .. })
        ));
    }

    #[test]
    fn labels() {
        let l = label_prefix(&SubgroupSpec::borel0(49)).unwrap();
        assert!(l.starts_with("49.56.1#"), "{l}");
        assert!(label_prefix(&SubgroupSpec::full(1))
            .unwrap()
            .starts_with("1.1.0#"));
        assert!(label_prefix(&SubgroupSpec::full(12))
            .unwrap()
            .starts_with("1.1.0#"));
        let l = label_prefix(&SubgroupSpec::borel_pm1(25)).unwrap();
        assert!(l.starts_with("25.300.12#"), "{l}");
        // A preimage is labelled at its level.
        let lifted = SubgroupSpec::borel0(7).lift(49).unwrap();
        assert!(label_prefix(&lifted).unwrap().starts_with("7.8.0#"));
        assert_eq!(
            label_prefix(&lifted).unwrap(),
            label_prefix(&lifted).unwrap()
        );
    }

    #[test]
    fn missing_minus_identity_is_adjoined() {
        let b1 = SubgroupSpec::borel(11, &UnitSubgroup::trivial(11)).unwrap();
        let d = curve_data(&b1).unwrap();
        assert!(d.adjoined_minus_i);
        assert_eq!(d.genus, 1);
    }
}
