//! Right-coset tables `H\G` with a hashable coset invariant.
//!
//! Each coset `Hg` is identified by a key that is constant on the coset. For
//! the structural families the key is a complete invariant and lookups are a
//! single hash probe. Otherwise the key only buckets candidates and equality
//! is decided by the membership test `g₁·g₂⁻¹ ∈ H`.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::subgroup::{SubgroupKind, SubgroupSpec, ORBIT_CAP};
use crate::zmod::{mulmod, units, Mat2};

pub(crate) type CosetKey = [u32; 5];

#[derive(Debug, Clone)]
enum Keyer {
    /// Every element of the ambient group lies in one coset.
    Trivial,
    /// Cosets of `B_Δ(n)`: the bottom row up to units, and the determinant
    /// up to `Δ` after normalizing the row.
    Borel {
        n: u32,
        units: Arc<Vec<u32>>,
        delta: Arc<Vec<u32>>,
    },
    /// Lexicographic minimum of `{h·g : h ∈ H}`, found row by row.
    Rows(Arc<RowChain>),
    /// Cosets of a preimage are cosets of the base after reduction.
    Reduce { m: u32, inner: Box<Keyer> },
    /// `±H`: the smaller of the keys of `g` and `−g`.
    PlusMinus { inner: Box<Keyer> },
    /// `H ∩ SL₂`: the key of `H` plus the determinant.
    WithDet { inner: Box<Keyer> },
    /// No invariant; every coset lands in one bucket.
    Scan,
}

/// For an enumerated `H`: the orbit `e₁H` with one `t` per point
/// (`e₁t = w`), and the orbit of `e₂` under the stabilizer of `e₁`.
///
/// The first row of `hg` ranges over `w·g` for `w ∈ e₁H`. Once the least
/// first row `w·g` is fixed, `h` ranges over `Stab(e₁)·t` and the second row
/// over `u·t·g` for `u ∈ e₂·Stab(e₁)`.
#[derive(Debug)]
struct RowChain {
    n: u32,
    first: Vec<((u32, u32), Mat2)>,
    second: Vec<(u32, u32)>,
}

impl RowChain {
    fn new(n: u32, elements: &HashSet<Mat2>) -> Self {
        let mut first: HashMap<(u32, u32), Mat2> = HashMap::new();
        let mut second: HashSet<(u32, u32)> = HashSet::new();
        let e1 = (1 % n, 0);
        for h in elements {
            first.entry((h.a, h.b)).or_insert(*h);
            if (h.a, h.b) == e1 {
                second.insert((h.c, h.d));
            }
        }
        let mut first: Vec<_> = first.into_iter().collect();
        first.sort_unstable();
        let mut second: Vec<_> = second.into_iter().collect();
        second.sort_unstable();
        RowChain { n, first, second }
    }

    fn row_times(&self, (x, y): (u32, u32), g: &Mat2) -> (u32, u32) {
        let n = self.n;
        (
            (mulmod(x, g.a, n) + mulmod(y, g.c, n)) % n,
            (mulmod(x, g.b, n) + mulmod(y, g.d, n)) % n,
        )
    }

    fn key(&self, g: &Mat2) -> CosetKey {
        let (row1, t) = self
            .first
            .iter()
            .map(|&(w, t)| (self.row_times(w, g), t))
            .min_by_key(|&(row, _)| row)
            .expect("a group is non-empty");
        let tg = t.mul_unchecked(g);
        let row2 = self
            .second
            .iter()
            .map(|&u| self.row_times(u, &tg))
            .min()
            .expect("e₂ is in its orbit");
        [row1.0, row1.1, row2.0, row2.1, 0]
    }
}

impl Keyer {
    fn for_subgroup(h: &SubgroupSpec) -> Result<Keyer> {
        let n = h.modulus();
        Ok(match h.kind() {
            SubgroupKind::Full => Keyer::Trivial,
            SubgroupKind::Borel(delta) => Keyer::Borel {
                n,
                units: Arc::new(units(n)),
                delta: Arc::new(delta.elements().to_vec()),
            },
            SubgroupKind::Lifted { base, base_modulus } => Keyer::Reduce {
                m: *base_modulus,
                inner: Box::new(Keyer::for_subgroup(base)?),
            },
            SubgroupKind::PlusMinus(base) => Keyer::PlusMinus {
                inner: Box::new(Keyer::for_subgroup(base)?),
            },
            SubgroupKind::Sl2Part(base) => Keyer::WithDet {
                inner: Box::new(Keyer::for_subgroup(base)?),
            },
            SubgroupKind::CartanNonsplitNormalizer { .. } => match h.elements() {
                Ok(elements) => Keyer::Rows(Arc::new(RowChain::new(n, &elements))),
                // Membership stays structural, so a scan still works.
                Err(Error::TooLarge { .. }) => Keyer::Scan,
                Err(e) => return Err(e),
            },
            SubgroupKind::Enumerated(_) | SubgroupKind::GeneratedClosure => {
                Keyer::Rows(Arc::new(RowChain::new(n, &*h.elements()?)))
            }
        })
    }

    fn is_complete(&self) -> bool {
        match self {
            Keyer::Trivial | Keyer::Borel { .. } | Keyer::Rows(_) => true,
            Keyer::Reduce { inner, .. } | Keyer::PlusMinus { inner } | Keyer::WithDet { inner } => {
                inner.is_complete()
            }
            Keyer::Scan => false,
        }
    }

    fn key(&self, g: &Mat2) -> CosetKey {
        match self {
            Keyer::Trivial | Keyer::Scan => [0; 5],
            Keyer::Borel { n, units, delta } => borel_key(*n, units, delta, g),
            Keyer::Rows(chain) => chain.key(g),
            Keyer::Reduce { m, inner } => inner.key(&g.reduce_unchecked(*m)),
            Keyer::PlusMinus { inner } => inner.key(g).min(inner.key(&g.neg())),
            Keyer::WithDet { inner } => {
                let mut k = inner.key(g);
                k[4] = g.det();
                k
            }
        }
    }
}

fn borel_key(n: u32, units: &[u32], delta: &[u32], g: &Mat2) -> CosetKey {
    // The bottom row of an invertible matrix is primitive, so unit scaling
    // acts freely on it and the normalizing unit is unique.
    let mut best = (u32::MAX, u32::MAX);
    let mut scale = 1;
    for &u in units {
        let row = (mulmod(u, g.c, n), mulmod(u, g.d, n));
        if row < best {
            best = row;
            scale = u;
        }
    }
    let det = mulmod(scale, g.det(), n);
    let det_class = delta.iter().map(|&x| mulmod(x, det, n)).min().unwrap_or(0);
    [best.0, best.1, det_class, 0, 0]
}

/// A set of right cosets `Hg`, each stored with a representative.
pub struct CosetTable<'h> {
    subgroup: &'h SubgroupSpec,
    keyer: Keyer,
    complete: bool,
    reps: Vec<Mat2>,
    rep_invs: Vec<Mat2>,
    buckets: HashMap<CosetKey, Vec<u32>>,
    cap: usize,
}

impl<'h> CosetTable<'h> {
    pub fn new(subgroup: &'h SubgroupSpec) -> Result<Self> {
        let keyer = Keyer::for_subgroup(subgroup)?;
        Ok(CosetTable {
            subgroup,
            complete: keyer.is_complete(),
            keyer,
            reps: Vec::new(),
            rep_invs: Vec::new(),
            buckets: HashMap::new(),
            cap: ORBIT_CAP,
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[Mat2] {
        &self.reps
    }

    pub fn subgroup(&self) -> &SubgroupSpec {
        self.subgroup
    }

    fn find_with_key(&self, key: &CosetKey, g: &Mat2) -> Option<usize> {
        let bucket = self.buckets.get(key)?;
        if self.complete {
            return bucket.first().map(|&i| i as usize);
        }
        bucket.iter().map(|&i| i as usize).find(|&i| {
            self.subgroup
                .contains_invertible(&g.mul_unchecked(&self.rep_invs[i]))
        })
    }

    /// Index of the coset containing `g`, if already present.
    pub fn locate(&self, g: &Mat2) -> Option<usize> {
        self.find_with_key(&self.keyer.key(g), g)
    }

    /// Inserts the coset of `g` if new. Returns its index and whether it was new.
    pub fn insert(&mut self, g: Mat2) -> Result<(usize, bool)> {
        let key = self.keyer.key(&g);
        if let Some(i) = self.find_with_key(&key, &g) {
            return Ok((i, false));
        }
        if self.reps.len() >= self.cap {
            return Err(Error::OrbitTooLarge { cap: self.cap });
        }
        let idx = self.reps.len();
        self.reps.push(g);
        if !self.complete {
            self.rep_invs.push(g.inv_unchecked());
        }
        self.buckets.entry(key).or_default().push(idx as u32);
        Ok((idx, true))
    }

    /// Breadth-first closure under right multiplication by `gens`, starting
    /// from the cosets already present.
    pub fn saturate(&mut self, gens: &[Mat2]) -> Result<()> {
        let mut head = 0;
        while head < self.reps.len() {
            let x = self.reps[head];
            head += 1;
            for g in gens {
                self.insert(x.mul_unchecked(g))?;
            }
        }
        Ok(())
    }

    /// The permutation of cosets induced by right multiplication by `g`.
    ///
    /// Panics if the table is not closed under `g`.
    pub fn permutation(&self, g: &Mat2) -> Vec<u32> {
        self.reps
            .par_iter()
            .map(|x| {
                self.locate(&x.mul_unchecked(g))
                    .expect("coset table is closed under the action") as u32
            })
            .collect()
    }
}

/// The orbit of the trivial coset `H·1` under right multiplication by `gens`.
pub fn orbit_of_identity<'h>(h: &'h SubgroupSpec, gens: &[Mat2]) -> Result<CosetTable<'h>> {
    let mut table = CosetTable::new(h)?;
    table.insert(Mat2::identity(h.modulus()))?;
    table.saturate(gens)?;
    Ok(table)
}

/// Orbits of a group of permutations, each as a list of points; orbits are
/// ordered by their least point.
pub fn permutation_orbits(size: usize, perms: &[Vec<u32>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; size];
    let mut orbits = Vec::new();
    for start in 0..size {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for p in perms {
                let y = p[x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
        }
        orbits.push(orbit);
    }
    orbits
}

pub fn fixed_points(perm: &[u32]) -> usize {
    perm.iter()
        .enumerate()
        .filter(|&(i, &j)| i == j as usize)
        .count()
}

pub fn cycle_count(perm: &[u32]) -> usize {
    permutation_orbits(perm.len(), std::slice::from_ref(&perm.to_vec())).len()
}
