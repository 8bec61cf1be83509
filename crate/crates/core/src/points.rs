//! Degrees of closed points on `X_H` lying over a fixed j-invariant.
//!
//! A Galois image `R ≤ GL₂(ℤ/nℤ)` acts on the right cosets `H\GL₂(ℤ/nℤ)` by
//! right multiplication. Closed points above `j` are the orbits of this
//! action, and a point's degree is `[ℚ(j):ℚ]` times its orbit size. The
//! trivial coset's orbit has size `[R : R ∩ H]`.

use std::collections::HashSet;

use serde::Serialize;

use crate::coset::{self, CosetTable};
use crate::error::{Error, Result};
use crate::geometry;
use crate::subgroup::{index_via_orbit, SubgroupSpec, ENUMERATION_CAP};
use crate::zmod::{euler_phi, is_prime, Mat2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// The point moves in a pencil, so it is not isolated.
    ForcedP1Parametrized,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ForcedP1Parametrized => "ForcedP1Parametrized",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A Galois image together with `[ℚ(j):ℚ]` and the automorphism group `A`.
#[derive(Debug, Clone)]
pub struct GaloisImageContext {
    pub image: SubgroupSpec,
    pub dj: u64,
    /// `None` means the generic `{±I}`.
    pub automorphisms: Option<Vec<Mat2>>,
    /// Set when `−I` was adjoined to the supplied image.
    pub adjoined_minus_i: bool,
}

impl GaloisImageContext {
    /// Context with `A = {±I}`; the image is replaced by `±R` if needed.
    pub fn new(image: SubgroupSpec, dj: u64) -> Result<Self> {
        if dj == 0 {
            return Err(Error::InvalidArgument("[Q(j):Q] must be positive".into()));
        }
        let adjoined_minus_i = !image.contains_minus_i();
        Ok(GaloisImageContext {
            image: image.adjoin_minus_i(),
            dj,
            automorphisms: None,
            adjoined_minus_i,
        })
    }

    /// Context with an explicit automorphism group `A` (generators); the
    /// image is used as given.
    pub fn with_automorphisms(image: SubgroupSpec, dj: u64, a: Vec<Mat2>) -> Result<Self> {
        if dj == 0 {
            return Err(Error::InvalidArgument("[Q(j):Q] must be positive".into()));
        }
        if let Some(g) = a.iter().find(|g| g.n != image.modulus()) {
            return Err(Error::ModulusMismatch {
                left: image.modulus(),
                right: g.n,
            });
        }
        Ok(GaloisImageContext {
            image,
            dj,
            automorphisms: Some(a),
            adjoined_minus_i: false,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.image.modulus()
    }

    fn check(&self, h: &SubgroupSpec) -> Result<()> {
        if h.modulus() != self.modulus() {
            return Err(Error::ModulusMismatch {
                left: self.modulus(),
                right: h.modulus(),
            });
        }
        Ok(())
    }
}

/// `[ℚ(j):ℚ] · [R : R ∩ H]`, with `H` replaced by `±H` when needed.
pub fn point_degree(ctx: &GaloisImageContext, h: &SubgroupSpec) -> Result<u64> {
    if ctx.automorphisms.is_some() {
        return point_degree_general(ctx, h);
    }
    ctx.check(h)?;
    let h = h.adjoin_minus_i();
    Ok(ctx.dj * index_via_orbit(&ctx.image, &h)?)
}

/// `[ℚ(j):ℚ] · [RA : RA ∩ AH]` by explicit enumeration of `RA` and `AH`.
pub fn point_degree_general(ctx: &GaloisImageContext, h: &SubgroupSpec) -> Result<u64> {
    ctx.check(h)?;
    let n = ctx.modulus();
    let a_gens = ctx
        .automorphisms
        .clone()
        .unwrap_or_else(|| vec![Mat2::minus_identity(n)]);
    let a = crate::subgroup::closure(n, &a_gens, ENUMERATION_CAP)?;
    let r = ctx.image.elements()?;
    if r.len().saturating_mul(a.len()) > ENUMERATION_CAP {
        return Err(Error::TooLarge {
            cap: ENUMERATION_CAP,
        });
    }
    let ra: HashSet<Mat2> = r
        .iter()
        .flat_map(|x| a.iter().map(move |y| x.mul_unchecked(y)))
        .collect();
    let a_inv: Vec<Mat2> = a.iter().map(|x| x.inv_unchecked()).collect();
    let in_ah = |x: &Mat2| {
        a_inv
            .iter()
            .any(|ai| h.contains_invertible(&ai.mul_unchecked(x)))
    };
    let meet = ra.iter().filter(|x| in_ah(x)).count() as u64;
    let total = ra.len() as u64;
    if meet == 0 || !total.is_multiple_of(meet) {
        return Err(Error::NonIntegral {
            numerator: total,
            denominator: meet,
        });
    }
    Ok(ctx.dj * (total / meet))
}

/// Degrees of all closed points of `X_H` above the j-invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberDegrees {
    /// Sorted ascending, one entry per orbit.
    pub degrees: Vec<u64>,
    /// Degree of the point attached to the trivial coset.
    pub identity_degree: u64,
    /// `[GL₂ : ±H]`.
    pub total_cosets: u64,
    pub dj: u64,
}

impl FiberDegrees {
    pub fn min(&self) -> u64 {
        self.degrees.first().copied().unwrap_or(0)
    }

    /// Orbit sizes sum to the number of cosets.
    pub fn orbit_size_sum(&self) -> u64 {
        self.degrees.iter().map(|d| d / self.dj).sum()
    }
}

fn gl2_cosets(h: &SubgroupSpec) -> Result<CosetTable<'_>> {
    let n = h.modulus();
    coset::orbit_of_identity(h, &crate::subgroup::full_generators(n))
}

/// Orbits of `R` on `±H\GL₂(ℤ/nℤ)`.
pub fn fiber_degrees(ctx: &GaloisImageContext, h: &SubgroupSpec) -> Result<FiberDegrees> {
    ctx.check(h)?;
    let h = h.adjoin_minus_i();
    let table = gl2_cosets(&h)?;
    let perms: Vec<Vec<u32>> = ctx
        .image
        .gens()
        .iter()
        .map(|g| table.permutation(g))
        .collect();
    let orbits = coset::permutation_orbits(table.len(), &perms);
    let mut degrees: Vec<u64> = orbits.iter().map(|o| ctx.dj * o.len() as u64).collect();
    // Coset 0 is the trivial coset, so the first orbit contains it.
    let identity_degree = degrees[0];
    degrees.sort_unstable();
    Ok(FiberDegrees {
        degrees,
        identity_degree,
        total_cosets: table.len() as u64,
        dj: ctx.dj,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PointDegreeReport {
    pub degree: u64,
    pub fiber_degrees: Vec<u64>,
    pub screen: Verdict,
    /// `[R : R ∩ H]`.
    pub image_index: u64,
    /// `[GL₂ : H]`.
    pub curve_index: u64,
    pub genus: u64,
    pub components: u64,
    pub adjoined_minus_i: bool,
}

/// Degree, fiber and Riemann–Roch screen for the point attached to the
/// trivial coset; `components` is the number of geometric components of `X_H`.
pub fn point_report(
    ctx: &GaloisImageContext,
    h: &SubgroupSpec,
    components: u64,
) -> Result<PointDegreeReport> {
    let fiber = fiber_degrees(ctx, h)?;
    let data = geometry::curve_data(h)?;
    let degree = point_degree(ctx, h)?;
    debug_assert_eq!(degree, fiber.identity_degree);
    Ok(PointDegreeReport {
        degree,
        fiber_degrees: fiber.degrees,
        screen: rr_screen(degree, components, data.genus),
        image_index: degree / ctx.dj,
        curve_index: fiber.total_cosets,
        genus: data.genus,
        components,
        adjoined_minus_i: ctx.adjoined_minus_i || data.adjoined_minus_i,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelReduction {
    #[serde(skip)]
    pub h_prime: SubgroupSpec,
    /// `[R ∩ H′ : R ∩ H]`.
    pub lhs: u64,
    /// `[H′ : H]`.
    pub rhs: u64,
    pub equal: bool,
    pub image_level: u32,
    pub sub_modulus: u32,
    /// Whether the level of `R` divides the reduction modulus.
    pub hypothesis_holds: bool,
    pub note: String,
}

/// Compares `[R ∩ H′ : R ∩ H]` with `[H′ : H]` for `H′` the preimage of `H`
/// modulo `sub_modulus`.
///
/// When the level of `R` divides `sub_modulus` the two agree, which makes
/// point degrees exactly multiplicative along `X_H → X_{H′}`. Otherwise the
/// comparison is still computed and reported with `hypothesis_holds = false`.
pub fn level_reduction(
    ctx: &GaloisImageContext,
    h: &SubgroupSpec,
    sub_modulus: u32,
) -> Result<LevelReduction> {
    ctx.check(h)?;
    let n = h.modulus();
    if sub_modulus == 0 || !n.is_multiple_of(sub_modulus) {
        return Err(Error::NonDivisor {
            divisor: sub_modulus,
            modulus: n,
        });
    }
    let h = h.adjoin_minus_i();
    let h_prime = h.reduce(sub_modulus)?.lift(n)?;
    let r = &ctx.image;
    let r_index_h = index_via_orbit(r, &h)?;
    let r_index_hp = index_via_orbit(r, &h_prime)?;
    if r_index_h % r_index_hp != 0 {
        return Err(Error::NonIntegral {
            numerator: r_index_h,
            denominator: r_index_hp,
        });
    }
    let lhs = r_index_h / r_index_hp;
    let rhs = index_via_orbit(&h_prime, &h)?;
    let image_level = r.level();
    let hypothesis_holds = sub_modulus.is_multiple_of(image_level);
    let equal = lhs == rhs;
    let note = match (hypothesis_holds, equal) {
        (_, true) => "deg(x) = deg(f)·deg(f(x)); if x is isolated then so is its image on X_H'".to_string(),
        (true, false) => "identity failed although the image level divides the reduction modulus".to_string(),
        (false, false) => format!(
            "image level {image_level} does not divide {sub_modulus}; degree is not multiplicative here"
        ),
    };
    Ok(LevelReduction {
        h_prime,
        lhs,
        rhs,
        equal,
        image_level,
        sub_modulus,
        hypothesis_holds,
        note,
    })
}

/// `deg(x) ≤ deg(f)·deg(f(x))`.
pub fn degree_bound_check(deg_x: u64, deg_f: u64, deg_fx: u64) -> bool {
    deg_x <= deg_f * deg_fx
}

/// A closed point of degree greater than `r·g` on a curve with `r` geometric
/// components and genus `g` is ℙ¹-parametrized.
pub fn rr_screen(degree: u64, components: u64, genus: u64) -> Verdict {
    if degree > components * genus {
        Verdict::ForcedP1Parametrized
    } else {
        Verdict::Inconclusive
    }
}

fn check_odd_prime(ell: u32) -> Result<()> {
    if ell == 2 || !is_prime(ell) {
        return Err(Error::InvalidArgument(format!("{ell} is not an odd prime")));
    }
    Ok(())
}

/// `(ℓ²−1)ℓ^{2n−2}/#Δ`, the degree of `X_Δ(ℓⁿ) → X(1)`.
pub fn cartan_degree_formula(ell: u32, n: u32, delta_order: u64) -> Result<u64> {
    check_odd_prime(ell)?;
    if n == 0 {
        return Err(Error::InvalidArgument("exponent must be positive".into()));
    }
    let q = (ell as u64).pow(n);
    if delta_order == 0
        || !delta_order.is_multiple_of(2)
        || !euler_phi(q as u32).is_multiple_of(delta_order)
    {
        return Err(Error::InvalidArgument(format!(
            "#Delta = {delta_order} is not the order of a subgroup containing -1 mod {q}"
        )));
    }
    let l = ell as u64;
    let numerator = (l * l - 1) * l.pow(2 * n - 2);
    if !numerator.is_multiple_of(delta_order) {
        return Err(Error::NonIntegral {
            numerator,
            denominator: delta_order,
        });
    }
    Ok(numerator / delta_order)
}

/// `ℓ(ℓ²−1)/#Δ`.
pub fn semidirect_lower_bound(ell: u32, delta_order: u64) -> Result<u64> {
    check_odd_prime(ell)?;
    if delta_order == 0 || !delta_order.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "#Delta = {delta_order} must be even"
        )));
    }
    let l = ell as u64;
    let numerator = l * (l * l - 1);
    if !numerator.is_multiple_of(delta_order) {
        return Err(Error::NonIntegral {
            numerator,
            denominator: delta_order,
        });
    }
    Ok(numerator / delta_order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::{unit_subgroups_containing_minus_one, UnitSubgroup};

    fn cns(q: u32) -> SubgroupSpec {
        SubgroupSpec::nonsplit_cartan_normalizer(q).unwrap()
    }

    fn borel_with_order(n: u32, order: u64) -> SubgroupSpec {
        let delta = unit_subgroups_containing_minus_one(n)
            .into_iter()
            .find(|d| d.order() == order)
            .unwrap();
        SubgroupSpec::borel(n, &delta).unwrap()
    }

    #[test]
    fn point_degree_examples() {
        let ctx = GaloisImageContext::new(cns(5), 1).unwrap();
        assert_eq!(point_degree(&ctx, &SubgroupSpec::borel_pm1(5)).unwrap(), 12);

        let full = GaloisImageContext::new(SubgroupSpec::full(25), 1).unwrap();
        let h = borel_with_order(25, 4);
        assert_eq!(point_degree(&full, &h).unwrap(), 150);

        let h = SubgroupSpec::borel0(7);
        let ctx = GaloisImageContext::new(h.clone(), 3).unwrap();
        assert_eq!(point_degree(&ctx, &h).unwrap(), 3);
    }

    /// `[RA : RA ∩ AH]` by looping over every matrix mod n.
    fn brute_general_degree(r: &SubgroupSpec, a: &[Mat2], h: &SubgroupSpec) -> u64 {
        let n = r.modulus();
        let a = crate::subgroup::closure(n, a, 1000).unwrap();
        let r_el = r.elements().unwrap();
        let (mut ra, mut meet) = (0u64, 0u64);
        for x in SubgroupSpec::full(n).elements().unwrap().iter() {
            let in_ra = a
                .iter()
                .any(|y| r_el.contains(&x.mul(&y.inv().unwrap()).unwrap()));
            let in_ah = a
                .iter()
                .any(|y| h.contains(&y.inv().unwrap().mul(x).unwrap()));
            if in_ra {
                ra += 1;
                if in_ah {
                    meet += 1;
                }
            }
        }
        ra / meet
    }

    #[test]
    fn general_degree_examples() {
        let r = cns(5);
        let h = SubgroupSpec::borel_pm1(5);
        let pm =
            GaloisImageContext::with_automorphisms(r.clone(), 1, vec![Mat2::minus_identity(5)])
                .unwrap();
        assert_eq!(point_degree_general(&pm, &h).unwrap(), 12);
        let triv = GaloisImageContext::with_automorphisms(r.clone(), 1, vec![]).unwrap();
        assert_eq!(
            point_degree_general(&triv, &h).unwrap(),
            index_via_orbit(&r, &h).unwrap()
        );

        // Full image at modulus 7 with a non-central order-4 automorphism group.
        let full = SubgroupSpec::full(7);
        let b1 = SubgroupSpec::borel(7, &UnitSubgroup::trivial(7)).unwrap();
        for a in [
            vec![Mat2::s(7)],
            vec![Mat2::minus_identity(7)],
            vec![Mat2::order_three(7)],
        ] {
            let ctx = GaloisImageContext::with_automorphisms(full.clone(), 1, a.clone()).unwrap();
            assert_eq!(
                point_degree_general(&ctx, &b1).unwrap(),
                brute_general_degree(&full, &a, &b1),
                "{a:?}"
            );
        }
    }

    #[test]
    fn fiber_examples() {
        let full = GaloisImageContext::new(SubgroupSpec::full(25), 1).unwrap();
        let h = borel_with_order(25, 4);
        let f = fiber_degrees(&full, &h).unwrap();
        assert_eq!(f.degrees, vec![150]);

        let ctx = GaloisImageContext::new(cns(5), 1).unwrap();
        let f = fiber_degrees(&ctx, &SubgroupSpec::borel0(5)).unwrap();
        assert_eq!(f.degrees, vec![6]);

        let f = fiber_degrees(&ctx, &SubgroupSpec::borel_pm1(5)).unwrap();
        assert_eq!(f.identity_degree, 12);
        assert_eq!(f.orbit_size_sum(), f.total_cosets);
        assert_eq!(f.total_cosets, 12);
    }

    #[test]
    fn level_reduction_examples() {
        let r = cns(5).lift(25).unwrap();
        let ctx = GaloisImageContext::new(r, 1).unwrap();
        let lr = level_reduction(&ctx, &SubgroupSpec::borel0(25), 5).unwrap();
        assert_eq!(
            (lr.lhs, lr.rhs, lr.equal, lr.hypothesis_holds),
            (5, 5, true, true)
        );

        let h = SubgroupSpec::borel0(5).lift(25).unwrap();
        let lr = level_reduction(&ctx, &h, 5).unwrap();
        assert_eq!((lr.lhs, lr.rhs), (1, 1));

        let full = GaloisImageContext::new(SubgroupSpec::full(27), 1).unwrap();
        let h = borel_with_order(27, 6);
        let lr = level_reduction(&full, &h, 9).unwrap();
        assert!(lr.equal);
        assert_eq!(lr.rhs, 3);
    }

    #[test]
    fn level_reduction_can_fail_without_hypothesis() {
        // Cns(25) has level 25, so reducing H to level 5 need not preserve degrees.
        let ctx = GaloisImageContext::new(cns(25), 1).unwrap();
        let lr = level_reduction(&ctx, &SubgroupSpec::borel_pm1(25), 5).unwrap();
        assert!(!lr.hypothesis_holds);
        assert_eq!(lr.image_level, 25);
    }

    #[test]
    fn degree_bound_examples() {
        assert!(degree_bound_check(12, 2, 6));
        assert!(degree_bound_check(5, 2, 3));
        assert!(!degree_bound_check(7, 2, 3));
    }

    #[test]
    fn rr_screen_examples() {
        assert_eq!(rr_screen(30, 1, 4), Verdict::ForcedP1Parametrized);
        assert_eq!(rr_screen(1, 1, 0), Verdict::ForcedP1Parametrized);
        assert_eq!(rr_screen(3, 1, 3), Verdict::Inconclusive);
        for g in 0..20 {
            let mut forced = false;
            for d in 1..60 {
                let v = rr_screen(d, 2, g) == Verdict::ForcedP1Parametrized;
                assert!(!forced || v);
                forced = v;
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(cartan_degree_formula(5, 1, 2).unwrap(), 12);
        assert_eq!(cartan_degree_formula(7, 2, 14).unwrap(), 168);
        for (ell, n) in [(5u32, 1u32), (5, 2), (7, 2), (11, 1), (13, 2)] {
            let q = ell.pow(n);
            let expected = (ell as u64).pow(n - 1) * (ell as u64 + 1);
            assert_eq!(
                cartan_degree_formula(ell, n, euler_phi(q)).unwrap(),
                expected
            );
        }
        assert_eq!(semidirect_lower_bound(7, 14).unwrap(), 24);
        assert_eq!(semidirect_lower_bound(11, 10).unwrap(), 132);
        assert_eq!(semidirect_lower_bound(13, 78).unwrap(), 28);
        assert!(cartan_degree_formula(2, 1, 2).is_err());
        assert!(cartan_degree_formula(5, 1, 3).is_err());
        assert!(semidirect_lower_bound(5, 7).is_err());
    }
}
