//! Subgroups of GL₂(ℤ/nℤ).
//!
//! A [`SubgroupSpec`] always carries a generating set and a membership
//! predicate. The predicate is structural for the named families (full group,
//! Borel groups `B_Δ(n)`, non-split Cartan normalizers, preimages under
//! reduction) and falls back to an enumerated element set otherwise, so most
//! computations only ever touch coset orbits and never the full group.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::coset;
use crate::error::{Error, Result};
use crate::zmod::{
    self, crt, divisors, euler_phi, factorize, greedy_unit_generators, prime_power, unit_closure,
    units, Mat2, UnitSubgroup,
};

/// Largest group we are willing to enumerate element by element.
pub const ENUMERATION_CAP: usize = 10_000_000;
/// Largest coset orbit we are willing to build.
pub const ORBIT_CAP: usize = 10_000_000;

/// #GL₂(ℤ/nℤ) = ∏ pᵢ^{4aᵢ−3}(pᵢ²−1)(pᵢ−1).
pub fn gl2_order(n: u32) -> u64 {
    factorize(n).into_iter().fold(1u64, |acc, (p, a)| {
        let p = p as u64;
        acc * p.pow(4 * a - 3) * (p * p - 1) * (p - 1)
    })
}

/// #SL₂(ℤ/nℤ) = #GL₂(ℤ/nℤ) / φ(n).
pub fn sl2_order(n: u32) -> u64 {
    gl2_order(n) / euler_phi(n)
}

/// #B_Δ(n) = #Δ · ∏ pᵢ^{2aᵢ−1}(pᵢ−1) = #Δ · n · φ(n).
pub fn borel_order(n: u32, delta_order: u64) -> u64 {
    delta_order * n as u64 * euler_phi(n)
}

/// [GL₂(ℤ/nℤ) : B_Δ(n)] = (1/#Δ) ∏ pᵢ^{2aᵢ−2}(pᵢ²−1).
pub fn borel_index(n: u32, delta_order: u64) -> Result<u64> {
    if delta_order == 0 || !euler_phi(n).is_multiple_of(delta_order) {
        return Err(Error::InvalidUnitSubgroup(format!(
            "no subgroup of order {delta_order} in the units mod {n}"
        )));
    }
    let numerator = factorize(n).into_iter().fold(1u64, |acc, (p, a)| {
        let p = p as u64;
        acc * p.pow(2 * a - 2) * (p * p - 1)
    });
    if delta_order == 0 || numerator % delta_order != 0 {
        return Err(Error::NonIntegral {
            numerator,
            denominator: delta_order,
        });
    }
    Ok(numerator / delta_order)
}

/// The least positive quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u32) -> u32 {
    (2..p)
        .find(|&x| !zmod::is_square_mod_prime(x, p))
        .expect("odd primes have non-residues")
}

/// Generators of (ℤ/nℤ)^×.
pub(crate) fn unit_generators(n: u32) -> Vec<u32> {
    greedy_unit_generators(n, &units(n))
}

/// σ, τ and `diag(u, 1)` for generators `u` of the units: a generating set of
/// GL₂(ℤ/nℤ).
pub(crate) fn full_generators(n: u32) -> Vec<Mat2> {
    if n == 1 {
        return Vec::new();
    }
    let mut gens = vec![Mat2::s(n), Mat2::t(n)];
    gens.extend(
        unit_generators(n)
            .into_iter()
            .filter(|&u| u != 1)
            .map(|u| Mat2::diag(n, u, 1)),
    );
    gens
}

/// Splits `n = n1 · n2` with `n1` supported on the primes of `m` and
/// `gcd(n2, m) = 1`.
fn split_by_support(n: u32, m: u32) -> (u32, u32) {
    let primes: Vec<u32> = factorize(m).into_iter().map(|(p, _)| p).collect();
    let n1 = factorize(n)
        .into_iter()
        .filter(|(p, _)| primes.contains(p))
        .fold(1u32, |acc, (p, e)| acc * p.pow(e));
    (n1, n / n1)
}

/// Embeds `x1 mod n1` and `x2 mod n2` into a single matrix modulo `n1·n2`.
fn crt_mat(x1: &Mat2, x2: &Mat2) -> Mat2 {
    let (n1, n2) = (x1.n, x2.n);
    Mat2 {
        n: n1 * n2,
        a: crt(x1.a, n1, x2.a, n2),
        b: crt(x1.b, n1, x2.b, n2),
        c: crt(x1.c, n1, x2.c, n2),
        d: crt(x1.d, n1, x2.d, n2),
    }
}

/// An invertible lift to modulus `n` of an invertible matrix modulo `m | n`.
pub(crate) fn lift_matrix(x: &Mat2, n: u32) -> Mat2 {
    let (n1, n2) = split_by_support(n, x.n);
    let top = Mat2 {
        n: n1,
        a: x.a,
        b: x.b,
        c: x.c,
        d: x.d,
    };
    crt_mat(&top, &Mat2::identity(n2))
}

/// Generators of ker(GL₂(ℤ/nℤ) → GL₂(ℤ/mℤ)) for `m | n`.
///
/// On the part of `n` supported on the primes of `m` the kernel is generated
/// by the unipotents `I + mE₁₂`, `I + mE₂₁` and diagonal matrices with
/// entries ≡ 1 mod m; on the coprime part it is all of GL₂.
pub fn kernel_generators(n: u32, m: u32) -> Vec<Mat2> {
    assert!(m >= 1 && n.is_multiple_of(m), "{m} must divide {n}");
    let (n1, n2) = split_by_support(n, m);
    let mut gens = Vec::new();
    if n1 > m {
        let id2 = Mat2::identity(n2);
        let congruent: Vec<u32> = (0..n1 / m).map(|k| 1 + k * m).collect();
        let diag_gens = greedy_unit_generators(n1, &congruent);
        let mut local = vec![
            Mat2::new(n1, 1, m as i64, 0, 1),
            Mat2::new(n1, 1, 0, m as i64, 1),
        ];
        for u in diag_gens {
            local.push(Mat2::diag(n1, u, 1));
            local.push(Mat2::diag(n1, 1, u));
        }
        gens.extend(local.iter().map(|g| crt_mat(g, &id2)));
    }
    if n2 > 1 {
        let id1 = Mat2::identity(n1);
        gens.extend(full_generators(n2).iter().map(|g| crt_mat(&id1, g)));
    }
    gens
}

/// Breadth-first closure of `gens` in GL₂(ℤ/nℤ).
pub fn closure(n: u32, gens: &[Mat2], cap: usize) -> Result<HashSet<Mat2>> {
    let id = Mat2::identity(n);
    let mut seen: HashSet<Mat2> = HashSet::from([id]);
    let mut queue = vec![id];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for g in gens {
            let y = x.mul_unchecked(g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::TooLarge { cap });
                }
                queue.push(y);
            }
        }
    }
    Ok(seen)
}

/// Picks generators from `candidates` greedily until the closure reaches
/// `target` elements.
fn greedy_generators(
    n: u32,
    candidates: impl Iterator<Item = Mat2>,
    target: usize,
) -> Result<Vec<Mat2>> {
    let mut gens = Vec::new();
    let mut current = closure(n, &gens, ENUMERATION_CAP)?;
    for x in candidates {
        if current.len() >= target {
            break;
        }
        if !current.contains(&x) {
            gens.push(x);
            current = closure(n, &gens, ENUMERATION_CAP)?;
        }
    }
    Ok(gens)
}

#[derive(Clone)]
pub enum SubgroupKind {
    /// All of GL₂(ℤ/nℤ).
    Full,
    /// `B_Δ(n) = {(δ a; 0 b) : δ ∈ Δ, b a unit}`.
    Borel(UnitSubgroup),
    /// `{(a εb; b a)} ∪ {(a εb; b a)·(1 0; 0 −1)}` with `ε` a fixed non-residue.
    CartanNonsplitNormalizer { eps: u32 },
    /// An explicitly listed element set.
    Enumerated(Arc<HashSet<Mat2>>),
    /// Full preimage of `base` (at `base_modulus`) under reduction.
    Lifted {
        base: Arc<SubgroupSpec>,
        base_modulus: u32,
    },
    /// The group generated by the generator list, enumerated on demand.
    GeneratedClosure,
    /// `⟨base, −I⟩ = base ∪ −base`.
    PlusMinus(Arc<SubgroupSpec>),
    /// `base ∩ SL₂(ℤ/nℤ)`.
    Sl2Part(Arc<SubgroupSpec>),
}

impl fmt::Debug for SubgroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupKind::Full => write!(f, "Full"),
            SubgroupKind::Borel(delta) => write!(f, "Borel({:?})", delta.elements()),
            SubgroupKind::CartanNonsplitNormalizer { eps } => write!(f, "Cns(eps = {eps})"),
            SubgroupKind::Enumerated(set) => write!(f, "Enumerated({} elements)", set.len()),
            SubgroupKind::Lifted { base, base_modulus } => {
                write!(f, "Lifted(from {base_modulus}: {:?})", base.kind)
            }
            SubgroupKind::GeneratedClosure => write!(f, "GeneratedClosure"),
            SubgroupKind::PlusMinus(base) => write!(f, "PlusMinus({:?})", base.kind),
            SubgroupKind::Sl2Part(base) => write!(f, "Sl2Part({:?})", base.kind),
        }
    }
}

/// A subgroup of GL₂(ℤ/nℤ): generators plus a membership predicate.
#[derive(Clone)]
pub struct SubgroupSpec {
    n: u32,
    gens: Vec<Mat2>,
    kind: SubgroupKind,
    label: Option<String>,
    order: OnceLock<Result<u64>>,
    elements: OnceLock<Result<Arc<HashSet<Mat2>>>>,
}

impl fmt::Debug for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupSpec")
            .field("n", &self.n)
            .field("kind", &self.kind)
            .field("gens", &self.gens.len())
            .field("label", &self.label)
            .finish()
    }
}

impl SubgroupSpec {
    fn build(n: u32, gens: Vec<Mat2>, kind: SubgroupKind) -> Self {
        debug_assert!(gens.iter().all(|g| g.n == n && g.is_invertible()));
        SubgroupSpec {
            n,
            gens,
            kind,
            label: None,
            order: OnceLock::new(),
            elements: OnceLock::new(),
        }
    }

    pub fn full(n: u32) -> Self {
        Self::build(n, full_generators(n), SubgroupKind::Full)
    }

    pub fn trivial(n: u32) -> Self {
        Self::build(n, Vec::new(), SubgroupKind::GeneratedClosure)
    }

    /// The group generated by `gens`. Every generator must be invertible.
    pub fn generated(n: u32, gens: Vec<Mat2>) -> Result<Self> {
        for g in &gens {
            if g.n != n {
                return Err(Error::ModulusMismatch {
                    left: n,
                    right: g.n,
                });
            }
            if !g.is_invertible() {
                return Err(Error::NonInvertible {
                    modulus: n,
                    det: g.det(),
                });
            }
        }
        let mut gens = gens;
        gens.retain(|g| !g.is_identity());
        Ok(Self::build(n, gens, SubgroupKind::GeneratedClosure))
    }

    /// A group given by its full element list; closure is verified.
    pub fn from_elements(n: u32, elements: impl IntoIterator<Item = Mat2>) -> Result<Self> {
        let set: HashSet<Mat2> = elements.into_iter().collect();
        if !set.contains(&Mat2::identity(n)) {
            return Err(Error::InvalidArgument(
                "element set does not contain the identity".into(),
            ));
        }
        for x in &set {
            if x.n != n || !x.is_invertible() {
                return Err(Error::InvalidArgument(format!(
                    "{x:?} is not in GL2(Z/{n})"
                )));
            }
        }
        let mut sorted: Vec<Mat2> = set.iter().copied().collect();
        sorted.sort_unstable();
        let gens = greedy_generators(n, sorted.into_iter(), set.len())?;
        let closed = closure(n, &gens, ENUMERATION_CAP)?;
        if closed.len() != set.len() {
            return Err(Error::InvalidArgument(
                "element set is not closed under multiplication".into(),
            ));
        }
        Ok(Self::build(
            n,
            gens,
            SubgroupKind::Enumerated(Arc::new(set)),
        ))
    }

    /// `B_Δ(n)`.
    pub fn borel(n: u32, delta: &UnitSubgroup) -> Result<Self> {
        if delta.modulus() != n {
            return Err(Error::ModulusMismatch {
                left: n,
                right: delta.modulus(),
            });
        }
        let mut gens: Vec<Mat2> = delta
            .generators()
            .into_iter()
            .filter(|&g| g != 1 % n)
            .map(|g| Mat2::diag(n, g, 1))
            .collect();
        gens.extend(
            unit_generators(n)
                .into_iter()
                .filter(|&u| u != 1 % n)
                .map(|u| Mat2::diag(n, 1, u)),
        );
        if n > 1 {
            gens.push(Mat2::t(n));
        }
        Ok(Self::build(n, gens, SubgroupKind::Borel(delta.clone())))
    }

    /// `B₀(n)`, the full upper-triangular Borel.
    pub fn borel0(n: u32) -> Self {
        Self::borel(n, &UnitSubgroup::full(n)).expect("moduli agree")
    }

    /// `B_{±1}(n)`.
    pub fn borel_pm1(n: u32) -> Self {
        Self::borel(n, &UnitSubgroup::plus_minus_one(n)).expect("moduli agree")
    }

    /// Normalizer of the non-split Cartan modulo `q = ℓᵈ`, `ℓ` odd.
    ///
    /// The Cartan is `{(a εb; b a)}` with `ε` the least positive non-residue
    /// mod `ℓ`, taken unchanged modulo `ℓᵈ`.
    pub fn nonsplit_cartan_normalizer(q: u32) -> Result<Self> {
        let (ell, _) = prime_power(q).ok_or(Error::NotOddPrimePower(q))?;
        if ell == 2 {
            return Err(Error::EvenPrimeUnsupported(ell));
        }
        Self::cartan_with_eps(q, least_nonresidue(ell))
    }

    fn cartan_with_eps(q: u32, eps: u32) -> Result<Self> {
        let (ell, d) = prime_power(q).ok_or(Error::NotOddPrimePower(q))?;
        let cartan_order = (ell as u64).pow(2 * (d - 1)) * (ell as u64 * ell as u64 - 1);
        let candidates = (0..q as i64)
            .flat_map(move |b| (0..q as i64).map(move |a| Mat2::new(q, a, eps as i64 * b, b, a)));
        let mut gens = greedy_generators(
            q,
            candidates.filter(|x| x.is_invertible()),
            cartan_order as usize,
        )?;
        gens.push(Mat2::diag(q, 1, q - 1));
        Ok(Self::build(
            q,
            gens,
            SubgroupKind::CartanNonsplitNormalizer { eps: eps % q },
        ))
    }

    /// Full preimage of the mod-ℓ non-split Cartan normalizer at `q = ℓᵈ`.
    pub fn cns_full_preimage(q: u32) -> Result<Self> {
        let (ell, _) = prime_power(q).ok_or(Error::NotOddPrimePower(q))?;
        Self::nonsplit_cartan_normalizer(ell)?.lift(q)
    }

    /// ker(GL₂(ℤ/nℤ) → GL₂(ℤ/mℤ)).
    pub fn kernel(n: u32, m: u32) -> Result<Self> {
        Self::trivial(m).lift(n)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn gens(&self) -> &[Mat2] {
        &self.gens
    }

    pub fn kind(&self) -> &SubgroupKind {
        &self.kind
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Membership test. Matrices at a different modulus are never members.
    pub fn contains(&self, g: &Mat2) -> bool {
        if g.n != self.n || !g.is_invertible() {
            return false;
        }
        self.contains_invertible(g)
    }

    pub(crate) fn contains_invertible(&self, g: &Mat2) -> bool {
        let n = self.n;
        match &self.kind {
            SubgroupKind::Full => true,
            SubgroupKind::Borel(delta) => g.c == 0 && delta.contains(g.a),
            SubgroupKind::CartanNonsplitNormalizer { eps } => {
                let eps_c = zmod::mulmod(*eps, g.c, n);
                let neg = |x: u32| (n - x) % n;
                (g.d == g.a && g.b == eps_c) || (g.d == neg(g.a) && g.b == neg(eps_c))
            }
            SubgroupKind::Enumerated(set) => set.contains(g),
            SubgroupKind::Lifted { base, base_modulus } => {
                base.contains_invertible(&g.reduce_unchecked(*base_modulus))
            }
            SubgroupKind::GeneratedClosure => match self.elements() {
                Ok(set) => set.contains(g),
                Err(_) => false,
            },
            SubgroupKind::PlusMinus(base) => {
                base.contains_invertible(g) || base.contains_invertible(&g.neg())
            }
            SubgroupKind::Sl2Part(base) => g.det() == 1 % n && base.contains_invertible(g),
        }
    }

    /// The full element set, enumerated by closure of the generators.
    pub fn elements(&self) -> Result<Arc<HashSet<Mat2>>> {
        self.elements
            .get_or_init(|| match &self.kind {
                SubgroupKind::Enumerated(set) => Ok(set.clone()),
                _ => closure(self.n, &self.gens, ENUMERATION_CAP).map(Arc::new),
            })
            .clone()
    }

    /// Exact group order: closed form for structural kinds, enumeration
    /// otherwise.
    pub fn order(&self) -> Result<u64> {
        self.order.get_or_init(|| self.compute_order()).clone()
    }

    fn compute_order(&self) -> Result<u64> {
        let n = self.n;
        match &self.kind {
            SubgroupKind::Full => Ok(gl2_order(n)),
            SubgroupKind::Borel(delta) => Ok(borel_order(n, delta.order())),
            SubgroupKind::CartanNonsplitNormalizer { .. } => {
                let (ell, d) = prime_power(n).ok_or(Error::NotOddPrimePower(n))?;
                let ell = ell as u64;
                Ok(2 * ell.pow(2 * (d - 1)) * (ell * ell - 1))
            }
            SubgroupKind::Lifted { base, base_modulus } => {
                Ok(base.order()? * (gl2_order(n) / gl2_order(*base_modulus)))
            }
            SubgroupKind::PlusMinus(base) => {
                let factor = if base.contains_minus_i() { 1 } else { 2 };
                Ok(base.order()? * factor)
            }
            SubgroupKind::Sl2Part(base) => Ok(base.order()? / base.det_image().len() as u64),
            SubgroupKind::Enumerated(_) | SubgroupKind::GeneratedClosure => {
                Ok(self.elements()?.len() as u64)
            }
        }
    }

    /// [GL₂(ℤ/nℤ) : H].
    pub fn index_in_gl2(&self) -> Result<u64> {
        Ok(gl2_order(self.n) / self.order()?)
    }

    /// det(H) as a sorted list of units.
    pub fn det_image(&self) -> Vec<u32> {
        let dets: Vec<u32> = self.gens.iter().map(|g| g.det()).collect();
        unit_closure(self.n, &dets)
    }

    pub fn has_full_det(&self) -> bool {
        self.det_image().len() as u64 == euler_phi(self.n)
    }

    pub fn contains_minus_i(&self) -> bool {
        self.contains(&Mat2::minus_identity(self.n))
    }

    /// `⟨H, −I⟩`. Returns a clone when `−I ∈ H`.
    pub fn adjoin_minus_i(&self) -> SubgroupSpec {
        if self.contains_minus_i() {
            return self.clone();
        }
        let n = self.n;
        match &self.kind {
            SubgroupKind::Borel(delta) => {
                Self::borel(n, &delta.with_minus_one()).expect("moduli agree")
            }
            _ => {
                let mut gens = self.gens.clone();
                gens.push(Mat2::minus_identity(n));
                Self::build(n, gens, SubgroupKind::PlusMinus(Arc::new(self.clone())))
            }
        }
    }

    /// Image under reduction modulo `m | n`.
    pub fn reduce(&self, m: u32) -> Result<SubgroupSpec> {
        let n = self.n;
        if m == 0 || !n.is_multiple_of(m) {
            return Err(Error::NonDivisor {
                divisor: m,
                modulus: n,
            });
        }
        if m == n {
            return Ok(self.clone());
        }
        match &self.kind {
            SubgroupKind::Full => Ok(Self::full(m)),
            SubgroupKind::Borel(delta) => Self::borel(m, &delta.reduce(m)?),
            SubgroupKind::CartanNonsplitNormalizer { eps } => {
                if m == 1 {
                    Ok(Self::full(1))
                } else {
                    Self::cartan_with_eps(m, eps % m)
                }
            }
            SubgroupKind::Lifted { base, base_modulus } => {
                let bm = *base_modulus;
                if m.is_multiple_of(bm) {
                    base.lift(m)
                } else if bm % m == 0 {
                    base.reduce(m)
                } else {
                    self.reduce_generic(m)
                }
            }
            SubgroupKind::PlusMinus(base) => Ok(base.reduce(m)?.adjoin_minus_i()),
            _ => self.reduce_generic(m),
        }
    }

    fn reduce_generic(&self, m: u32) -> Result<SubgroupSpec> {
        let gens = self.gens.iter().map(|g| g.reduce_unchecked(m)).collect();
        Self::generated(m, gens)
    }

    /// Full preimage modulo `big` (a multiple of `n`).
    pub fn lift(&self, big: u32) -> Result<SubgroupSpec> {
        let n = self.n;
        if n == 0 || !big.is_multiple_of(n) {
            return Err(Error::NonDivisor {
                divisor: n,
                modulus: big,
            });
        }
        if big == n {
            return Ok(self.clone());
        }
        let (base, bm) = match &self.kind {
            SubgroupKind::Full => return Ok(Self::full(big)),
            SubgroupKind::Lifted { base, base_modulus } => (base.clone(), *base_modulus),
            _ => (Arc::new(self.clone()), n),
        };
        let mut gens: Vec<Mat2> = base.gens.iter().map(|g| lift_matrix(g, big)).collect();
        gens.extend(kernel_generators(big, bm));
        gens.retain(|g| !g.is_identity());
        gens.sort_unstable();
        gens.dedup();
        Ok(Self::build(
            big,
            gens,
            SubgroupKind::Lifted {
                base,
                base_modulus: bm,
            },
        ))
    }

    /// True when `ker(π_d) ⊆ H`.
    pub fn contains_kernel(&self, d: u32) -> bool {
        kernel_generators(self.n, d)
            .iter()
            .all(|g| self.contains_invertible(g))
    }

    /// The least divisor `d` of `n` with `ker(π_d) ⊆ H`.
    pub fn level(&self) -> u32 {
        divisors(self.n)
            .into_iter()
            .find(|&d| self.contains_kernel(d))
            .unwrap_or(self.n)
    }

    pub(crate) fn sl2_part_with_gens(&self, gens: Vec<Mat2>) -> SubgroupSpec {
        Self::build(self.n, gens, SubgroupKind::Sl2Part(Arc::new(self.clone())))
    }

    /// True if every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &SubgroupSpec) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch {
                left: self.n,
                right: other.n,
            });
        }
        match self.gens.iter().position(|g| !other.contains_invertible(g)) {
            Some(index) => Err(Error::NotASubgroup { index }),
            None => Ok(()),
        }
    }
}

/// `[R : R ∩ H]`, as the size of the orbit of the trivial coset `H·1` under
/// right multiplication by the generators of `R`.
pub fn index_via_orbit(r: &SubgroupSpec, h: &SubgroupSpec) -> Result<u64> {
    if r.modulus() != h.modulus() {
        return Err(Error::ModulusMismatch {
            left: r.modulus(),
            right: h.modulus(),
        });
    }
    let table = coset::orbit_of_identity(h, r.gens())?;
    Ok(table.len() as u64)
}

pub fn contains_minus_i(h: &SubgroupSpec) -> bool {
    h.contains_minus_i()
}

pub fn adjoin_minus_i(h: &SubgroupSpec) -> SubgroupSpec {
    h.adjoin_minus_i()
}

pub fn reduce_subgroup(h: &SubgroupSpec, m: u32) -> Result<SubgroupSpec> {
    h.reduce(m)
}

pub fn lift_subgroup(h: &SubgroupSpec, n: u32) -> Result<SubgroupSpec> {
    h.lift(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ProductSet {
    pub is_group: bool,
    pub size: u64,
}

fn product_elements(h: &SubgroupSpec, k: &SubgroupSpec) -> Result<HashSet<Mat2>> {
    let (he, ke) = (h.elements()?, k.elements()?);
    if he.len().saturating_mul(ke.len()) > 10 * ENUMERATION_CAP {
        return Err(Error::TooLarge {
            cap: ENUMERATION_CAP,
        });
    }
    let mut out = HashSet::with_capacity(he.len().max(ke.len()));
    for x in he.iter() {
        for y in ke.iter() {
            out.insert(x.mul_unchecked(y));
            if out.len() > ENUMERATION_CAP {
                return Err(Error::TooLarge {
                    cap: ENUMERATION_CAP,
                });
            }
        }
    }
    Ok(out)
}

/// The product set `HK`: its size and whether it is a subgroup.
pub fn product_set_check(h: &SubgroupSpec, k: &SubgroupSpec) -> Result<ProductSet> {
    if h.modulus() != k.modulus() {
        return Err(Error::ModulusMismatch {
            left: h.modulus(),
            right: k.modulus(),
        });
    }
    let set = product_elements(h, k)?;
    // HK is a group iff it is stable under right multiplication by generators of H and K.
    let is_group = set.iter().all(|x| {
        h.gens()
            .iter()
            .chain(k.gens())
            .all(|g| set.contains(&x.mul_unchecked(g)))
    });
    Ok(ProductSet {
        is_group,
        size: set.len() as u64,
    })
}

/// Checks `π⁻¹(π(H)) = H · ker(π)` as sets, for reduction modulo `m`.
pub fn preimage_equals_product(h: &SubgroupSpec, m: u32) -> Result<bool> {
    let preimage = h.reduce(m)?.lift(h.modulus())?;
    let kernel = SubgroupSpec::kernel(h.modulus(), m)?;
    let product = product_elements(h, &kernel)?;
    Ok(product.len() as u64 == preimage.order()? && product.iter().all(|x| preimage.contains(x)))
}

/// `[G : H] ≥ [π(G) : π(H)]` for reduction modulo `m`.
pub fn surjective_image_index_check(g: &SubgroupSpec, h: &SubgroupSpec, m: u32) -> Result<bool> {
    h.is_subgroup_of(g)?;
    let upstairs = index_via_orbit(g, h)?;
    let downstairs = index_via_orbit(&g.reduce(m)?, &h.reduce(m)?)?;
    Ok(upstairs >= downstairs)
}
