//! Arithmetic over ℤ/nℤ: 2×2 matrices, the unit group and its subgroups.
//!
//! Every matrix carries its modulus. Moduli are capped at 2³¹ so that all
//! products of two residues fit comfortably in a `u64`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_MODULUS: u64 = 1 << 31;

pub fn check_modulus(n: u64) -> Result<u32> {
    if n == 0 || n > MAX_MODULUS {
        return Err(Error::InvalidModulus(n));
    }
    Ok(n as u32)
}

#[inline]
pub(crate) fn mulmod(x: u32, y: u32, n: u32) -> u32 {
    ((x as u64 * y as u64) % n as u64) as u32
}

#[inline]
pub(crate) fn residue(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

/// Inverse of `x` modulo `n`, if it exists.
pub fn inv_mod(x: u32, n: u32) -> Option<u32> {
    if n == 1 {
        return Some(0);
    }
    let e = (x as i64).extended_gcd(&(n as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(residue(e.x, n))
}

pub fn is_unit(x: u32, n: u32) -> bool {
    (x as u64).gcd(&(n as u64)) == 1
}

/// Prime factorization as `(p, e)` pairs in increasing order of `p`.
pub fn factorize(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= n as u64 {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u32) -> Vec<u32> {
    let mut divs = vec![1u32];
    for (p, e) in factorize(n) {
        let current = divs.clone();
        let mut pk = 1u32;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

/// Returns `(ℓ, k)` when `n = ℓᵏ` with `ℓ` prime and `k ≥ 1`.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    match factorize(n).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn is_prime(n: u32) -> bool {
    matches!(prime_power(n), Some((_, 1)))
}

/// Euler's totient: the number of units in ℤ/nℤ.
pub fn euler_phi(n: u32) -> u64 {
    factorize(n).into_iter().fold(1u64, |acc, (p, e)| {
        acc * (p as u64 - 1) * (p as u64).pow(e - 1)
    })
}

/// Sorted list of units modulo `n`. For `n = 1` this is `[0]`.
pub fn units(n: u32) -> Vec<u32> {
    (0..n).filter(|&x| is_unit(x, n)).collect()
}

/// Chinese remaindering of `x1 mod n1` and `x2 mod n2` for coprime moduli.
pub(crate) fn crt(x1: u32, n1: u32, x2: u32, n2: u32) -> u32 {
    if n2 == 1 {
        return x1 % n1;
    }
    if n1 == 1 {
        return x2 % n2;
    }
    let n = n1 as u64 * n2 as u64;
    // x = x1 + n1 * t with n1 t ≡ x2 - x1 (mod n2)
    let inv = inv_mod(n1 % n2, n2).expect("crt moduli must be coprime") as u64;
    let diff = (x2 as i64 - x1 as i64).rem_euclid(n2 as i64) as u64;
    let t = diff * inv % n2 as u64;
    ((x1 as u64 + n1 as u64 * t) % n) as u32
}

/// Quadratic residue test modulo an odd prime by Euler's criterion.
pub(crate) fn is_square_mod_prime(x: u32, p: u32) -> bool {
    let x = x % p;
    if x == 0 {
        return true;
    }
    let mut base = x as u64;
    let mut exp = (p - 1) / 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc == 1
}

/// A 2×2 matrix `(a b; c d)` over ℤ/nℤ, stored row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} {}; {} {}] mod {}",
            self.a, self.b, self.c, self.d, self.n
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.a, self.b, self.c, self.d)
    }
}

impl Mat2 {
    /// Builds a matrix from arbitrary integers, reducing each entry mod `n`.
    pub fn new(n: u32, a: i64, b: i64, c: i64, d: i64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        Mat2 {
            n,
            a: residue(a, n),
            b: residue(b, n),
            c: residue(c, n),
            d: residue(d, n),
        }
    }

    pub fn from_row_major(n: u32, entries: [i64; 4]) -> Self {
        Self::new(n, entries[0], entries[1], entries[2], entries[3])
    }

    pub fn identity(n: u32) -> Self {
        Self::new(n, 1, 0, 0, 1)
    }

    pub fn minus_identity(n: u32) -> Self {
        Self::new(n, -1, 0, 0, -1)
    }

    pub fn diag(n: u32, x: u32, y: u32) -> Self {
        Self::new(n, x as i64, 0, 0, y as i64)
    }

    /// `σ = (0 −1; 1 0)`.
    pub fn s(n: u32) -> Self {
        Self::new(n, 0, -1, 1, 0)
    }

    /// `τ = (1 1; 0 1)`.
    pub fn t(n: u32) -> Self {
        Self::new(n, 1, 1, 0, 1)
    }

    /// `(0 −1; 1 −1)`, of order 3.
    pub fn order_three(n: u32) -> Self {
        Self::new(n, 0, -1, 1, -1)
    }

    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Product without a modulus check. Callers guarantee equal moduli.
    #[inline]
    pub(crate) fn mul_unchecked(&self, o: &Mat2) -> Mat2 {
        debug_assert_eq!(self.n, o.n);
        let n = self.n as u64;
        let (a, b, c, d) = (self.a as u64, self.b as u64, self.c as u64, self.d as u64);
        let (e, f, g, h) = (o.a as u64, o.b as u64, o.c as u64, o.d as u64);
        Mat2 {
            n: self.n,
            a: ((a * e % n + b * g % n) % n) as u32,
            b: ((a * f % n + b * h % n) % n) as u32,
            c: ((c * e % n + d * g % n) % n) as u32,
            d: ((c * f % n + d * h % n) % n) as u32,
        }
    }

    pub fn mul(&self, o: &Mat2) -> Result<Mat2> {
        if self.n != o.n {
            return Err(Error::ModulusMismatch {
                left: self.n,
                right: o.n,
            });
        }
        Ok(self.mul_unchecked(o))
    }

    pub fn det(&self) -> u32 {
        let n = self.n as u64;
        let ad = self.a as u64 * self.d as u64 % n;
        let bc = self.b as u64 * self.c as u64 % n;
        ((ad + n - bc) % n) as u32
    }

    pub fn is_invertible(&self) -> bool {
        is_unit(self.det(), self.n)
    }

    pub fn inv(&self) -> Result<Mat2> {
        let det = self.det();
        let di = inv_mod(det, self.n).ok_or(Error::NonInvertible {
            modulus: self.n,
            det,
        })?;
        let n = self.n;
        let neg = |x: u32| if x == 0 { 0 } else { n - x };
        Ok(Mat2 {
            n,
            a: mulmod(self.d, di, n),
            b: mulmod(neg(self.b), di, n),
            c: mulmod(neg(self.c), di, n),
            d: mulmod(self.a, di, n),
        })
    }

    pub(crate) fn inv_unchecked(&self) -> Mat2 {
        self.inv().expect("matrix must be invertible")
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(
            self.n,
            -(self.a as i64),
            -(self.b as i64),
            -(self.c as i64),
            -(self.d as i64),
        )
    }

    pub fn scale(&self, k: u32) -> Mat2 {
        let n = self.n;
        Mat2 {
            n,
            a: mulmod(self.a, k, n),
            b: mulmod(self.b, k, n),
            c: mulmod(self.c, k, n),
            d: mulmod(self.d, k, n),
        }
    }

    /// Entrywise reduction to a modulus `m` dividing `self.n`.
    pub fn reduce(&self, m: u32) -> Result<Mat2> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NonDivisor {
                divisor: m,
                modulus: self.n,
            });
        }
        Ok(self.reduce_unchecked(m))
    }

    #[inline]
    pub(crate) fn reduce_unchecked(&self, m: u32) -> Mat2 {
        Mat2 {
            n: m,
            a: self.a % m,
            b: self.b % m,
            c: self.c % m,
            d: self.d % m,
        }
    }

    pub fn pow(&self, mut e: u64) -> Mat2 {
        let mut base = *self;
        let mut acc = Mat2::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order, assuming the matrix is invertible.
    pub fn order(&self) -> u64 {
        let id = Mat2::identity(self.n);
        let mut x = *self;
        let mut k = 1u64;
        while x != id {
            x = x.mul_unchecked(self);
            k += 1;
        }
        k
    }
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Result<Mat2> {
    x.mul(y)
}

pub fn mat_det(x: &Mat2) -> u32 {
    x.det()
}

pub fn mat_inv(x: &Mat2) -> Result<Mat2> {
    x.inv()
}

pub fn mat_reduce(x: &Mat2, m: u32) -> Result<Mat2> {
    x.reduce(m)
}

/// Closure of `gens` under multiplication in (ℤ/nℤ)^×, as a sorted list.
pub fn unit_closure(n: u32, gens: &[u32]) -> Vec<u32> {
    let one = 1 % n;
    let mut seen: HashSet<u32> = HashSet::from([one]);
    let mut stack = vec![one];
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = mulmod(x, g % n, n);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    let mut out: Vec<u32> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Picks a small generating set for the group `elements` by scanning in order.
pub(crate) fn greedy_unit_generators(n: u32, elements: &[u32]) -> Vec<u32> {
    let mut gens = Vec::new();
    let mut closure: HashSet<u32> = HashSet::from([1 % n]);
    for &x in elements {
        if closure.len() == elements.len() {
            break;
        }
        if !closure.contains(&x) {
            gens.push(x);
            closure = unit_closure(n, &gens).into_iter().collect();
        }
    }
    gens
}

/// A subgroup of (ℤ/nℤ)^×, stored as its sorted element list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitSubgroup {
    n: u32,
    elements: Vec<u32>,
}

impl fmt::Debug for UnitSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitSubgroup(mod {}, {:?})", self.n, self.elements)
    }
}

impl UnitSubgroup {
    /// The subgroup generated by `gens` (each reduced mod `n`).
    pub fn generated_by(n: u32, gens: &[i64]) -> Result<Self> {
        let gens: Vec<u32> = gens.iter().map(|&g| residue(g, n)).collect();
        if let Some(&bad) = gens.iter().find(|&&g| !is_unit(g, n)) {
            return Err(Error::InvalidUnitSubgroup(format!(
                "{bad} is not a unit modulo {n}"
            )));
        }
        Ok(UnitSubgroup {
            n,
            elements: unit_closure(n, &gens),
        })
    }

    /// Validates that `elements` is a subgroup of the units.
    pub fn from_elements(n: u32, elements: impl IntoIterator<Item = u32>) -> Result<Self> {
        let set: BTreeSet<u32> = elements.into_iter().map(|x| x % n).collect();
        if !set.contains(&(1 % n)) {
            return Err(Error::InvalidUnitSubgroup("does not contain 1".into()));
        }
        for &x in &set {
            if !is_unit(x, n) {
                return Err(Error::InvalidUnitSubgroup(format!(
                    "{x} is not a unit modulo {n}"
                )));
            }
            for &y in &set {
                if !set.contains(&mulmod(x, y, n)) {
                    return Err(Error::InvalidUnitSubgroup(
                        "not closed under multiplication".into(),
                    ));
                }
            }
        }
        Ok(UnitSubgroup {
            n,
            elements: set.into_iter().collect(),
        })
    }

    pub fn full(n: u32) -> Self {
        UnitSubgroup {
            n,
            elements: units(n),
        }
    }

    pub fn trivial(n: u32) -> Self {
        UnitSubgroup {
            n,
            elements: vec![1 % n],
        }
    }

    /// `{±1}`.
    pub fn plus_minus_one(n: u32) -> Self {
        UnitSubgroup {
            n,
            elements: unit_closure(n, &[n - 1 % n]),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&(x % self.n)).is_ok()
    }

    pub fn contains_minus_one(&self) -> bool {
        self.contains(self.n - 1 % self.n)
    }

    pub fn generators(&self) -> Vec<u32> {
        greedy_unit_generators(self.n, &self.elements)
    }

    /// Image under reduction to a modulus `m` dividing `n`.
    pub fn reduce(&self, m: u32) -> Result<Self> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NonDivisor {
                divisor: m,
                modulus: self.n,
            });
        }
        let set: BTreeSet<u32> = self.elements.iter().map(|x| x % m).collect();
        Ok(UnitSubgroup {
            n: m,
            elements: set.into_iter().collect(),
        })
    }

    /// `⟨Δ, −1⟩`.
    pub fn with_minus_one(&self) -> Self {
        let mut gens = self.generators();
        gens.push(self.n - 1 % self.n);
        UnitSubgroup {
            n: self.n,
            elements: unit_closure(self.n, &gens),
        }
    }

    pub fn is_full(&self) -> bool {
        self.order() == euler_phi(self.n)
    }
}

/// Every subgroup of (ℤ/nℤ)^× containing −1, sorted by order and then by
/// element list.
///
/// Subgroups are built as joins of cyclic subgroups, so the work is bounded
/// by the number of subgroups times the number of cyclic subgroups.
pub fn unit_subgroups_containing_minus_one(n: u32) -> Vec<UnitSubgroup> {
    if n < 3 {
        return vec![UnitSubgroup::full(n)];
    }
    let all = units(n);
    let mut cyclic: BTreeSet<Vec<u32>> = BTreeSet::new();
    for &x in &all {
        cyclic.insert(unit_closure(n, &[x]));
    }
    let cyclic: Vec<Vec<u32>> = cyclic.into_iter().collect();

    let start = unit_closure(n, &[n - 1]);
    let mut found: BTreeSet<Vec<u32>> = BTreeSet::from([start.clone()]);
    let mut frontier = vec![start];
    while let Some(k) = frontier.pop() {
        let kset: HashSet<u32> = k.iter().copied().collect();
        for c in &cyclic {
            if c.iter().all(|x| kset.contains(x)) {
                continue;
            }
            let mut join: BTreeSet<u32> = BTreeSet::new();
            for &x in &k {
                for &y in c {
                    join.insert(mulmod(x, y, n));
                }
            }
            let join: Vec<u32> = join.into_iter().collect();
            if found.insert(join.clone()) {
                frontier.push(join);
            }
        }
    }
    let mut out: Vec<UnitSubgroup> = found
        .into_iter()
        .map(|elements| UnitSubgroup { n, elements })
        .collect();
    out.sort_by(|x, y| {
        x.order()
            .cmp(&y.order())
            .then_with(|| x.elements.cmp(&y.elements))
    });
    out
}

/// Subgroups strictly between `{±1}` and the full unit group.
pub fn intermediate_unit_subgroups(n: u32) -> Vec<UnitSubgroup> {
    let pm = UnitSubgroup::plus_minus_one(n).order();
    let phi = euler_phi(n);
    unit_subgroups_containing_minus_one(n)
        .into_iter()
        .filter(|d| d.order() != pm && d.order() != phi)
        .collect()
}
