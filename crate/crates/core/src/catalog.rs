//! Catalogs of ℓ-adic images, the isolated-point screen over them, and the
//! intermediate-curve tables.
//!
//! A catalog is UTF-8 text with one JSON object per line:
//!
//! ```text
//! # comment
//! {"label":"5.B","level":5,"gens":[[1,1,0,1],[2,0,0,1],[1,0,0,2]]}
//! ```
//!
//! Each generator is a row-major 2×2 matrix `[a, b, c, d]`.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::points::{self, GaloisImageContext, Verdict};
use crate::subgroup::{borel_index, borel_order, gl2_order, SubgroupSpec};
use crate::zmod::{
    check_modulus, intermediate_unit_subgroups, is_prime, prime_power,
    unit_subgroups_containing_minus_one, Mat2,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub label: String,
    pub level: u32,
    pub gens: Vec<[i64; 4]>,
    #[serde(skip)]
    pub source_line: usize,
}

#[derive(Deserialize)]
struct RawEntry {
    label: String,
    level: u64,
    gens: Vec<Vec<i64>>,
}

impl CatalogEntry {
    pub fn matrices(&self) -> Vec<Mat2> {
        self.gens
            .iter()
            .map(|g| Mat2::from_row_major(self.level, *g))
            .collect()
    }

    pub fn to_subgroup(&self) -> Result<SubgroupSpec> {
        Ok(SubgroupSpec::generated(self.level, self.matrices())?.with_label(self.label.clone()))
    }
}

fn parse_line(text: &str, line: usize) -> Result<CatalogEntry> {
    let parse_err = |message: String| Error::Parse { line, message };
    let raw: RawEntry = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    if raw.label.trim().is_empty() {
        return Err(parse_err("empty label".into()));
    }
    let level = check_modulus(raw.level).map_err(|e| parse_err(e.to_string()))?;
    let mut gens = Vec::with_capacity(raw.gens.len());
    for (row, g) in raw.gens.iter().enumerate() {
        let g: [i64; 4] = g.as_slice().try_into().map_err(|_| {
            parse_err(format!(
                "generator {row} has {} entries, expected 4",
                g.len()
            ))
        })?;
        if !Mat2::from_row_major(level, g).is_invertible() {
            return Err(Error::NonInvertibleGenerator {
                label: raw.label,
                row,
                level,
            });
        }
        gens.push(g);
    }
    Ok(CatalogEntry {
        label: raw.label,
        level,
        gens,
        source_line: line,
    })
}

/// Reads a catalog. Blank lines and lines starting with `#` are skipped;
/// line numbers in errors are 1-based.
pub fn parse_catalog(reader: impl BufRead) -> Result<Vec<CatalogEntry>> {
    let mut entries = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, text) in reader.lines().enumerate() {
        let line = i + 1;
        let text = text.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let entry = parse_line(trimmed, line)?;
        if seen.insert(entry.label.clone(), line).is_some() {
            return Err(Error::DuplicateLabel {
                label: entry.label,
                line,
            });
        }
        entries.push(entry);
    }
    Ok(entries)
}

pub fn parse_catalog_str(text: &str) -> Result<Vec<CatalogEntry>> {
    parse_catalog(text.as_bytes())
}

pub fn write_catalog(entries: &[CatalogEntry], mut out: impl Write) -> std::io::Result<()> {
    for e in entries {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn find_entry<'a>(entries: &'a [CatalogEntry], label: &str) -> Result<&'a CatalogEntry> {
    entries
        .iter()
        .find(|e| e.label == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScreenRow {
    pub ell_n: u32,
    pub delta_order: u64,
    pub genus: u64,
    /// Least degree of a point of `X₁(ℓⁿ)` above the j-invariant.
    pub fiber_min_degree: u64,
    /// `(#Δ/2)·genus(X_Δ(ℓⁿ))`.
    pub threshold: u64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScreenReport {
    pub label: String,
    pub ell: u32,
    /// Exponent of the entry's level.
    pub level_exponent: u32,
    pub rows: Vec<ScreenRow>,
    /// Genus of `X_{R(ℓ)}`, absent when `R(ℓ)` lacks full determinant.
    pub genus_at_ell: Option<u64>,
    pub genus_zero_at_ell: bool,
    /// Some row has a fiber point of degree at most its threshold.
    pub fiber_survivor: bool,
    pub verdict: Verdict,
}

fn entry_prime(entry: &CatalogEntry, ell: Option<u32>) -> Result<(u32, u32)> {
    if entry.level == 1 {
        let l = ell.ok_or_else(|| {
            Error::InvalidArgument(format!(
                "entry {} has level 1; a prime is required",
                entry.label
            ))
        })?;
        if !is_prime(l) {
            return Err(Error::InvalidArgument(format!("{l} is not prime")));
        }
        return Ok((l, 0));
    }
    let (p, k) = prime_power(entry.level).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "entry {} has level {}, which is not a prime power",
            entry.label, entry.level
        ))
    })?;
    match ell {
        Some(l) if l != p => Err(Error::InvalidArgument(format!(
            "entry {} has level {} which is not a power of {l}",
            entry.label, entry.level
        ))),
        _ => Ok((p, k)),
    }
}

/// The image at modulus `q`: lifted when the level divides `q`, reduced
/// otherwise.
fn image_at(r: &SubgroupSpec, q: u32) -> Result<SubgroupSpec> {
    let level = r.modulus();
    if q.is_multiple_of(level) {
        r.lift(q)
    } else {
        r.reduce(q)
    }
}

fn checked_pow(ell: u32, n: u32) -> Result<u32> {
    let q = (ell as u64)
        .checked_pow(n)
        .ok_or(Error::InvalidArgument("modulus overflow".into()))?;
    check_modulus(q)
}

/// Screens one image over `ℓⁿ` for `n_min ≤ n ≤ n_max` and every
/// intermediate `{±1} ⊊ Δ ⊊ (ℤ/ℓⁿ)^×`.
///
/// A row is ForcedP1Parametrized when every point of `X₁(ℓⁿ)` above the
/// j-invariant has degree above `(#Δ/2)·genus(X_Δ(ℓⁿ))`. The entry is
/// ForcedP1Parametrized when every row is, or when `X_{R(ℓ)}` has genus 0.
pub fn screen_entry_range(
    entry: &CatalogEntry,
    ell: Option<u32>,
    n_min: u32,
    n_max: u32,
) -> Result<ScreenReport> {
    let (ell, k) = entry_prime(entry, ell)?;
    let r = entry.to_subgroup()?;
    let mut rows = Vec::new();
    for n in n_min.max(1)..=n_max {
        let q = checked_pow(ell, n)?;
        let ctx = GaloisImageContext::new(image_at(&r, q)?, 1)?;
        let deltas = intermediate_unit_subgroups(q);
        if deltas.is_empty() {
            continue;
        }
        let fiber = points::fiber_degrees(&ctx, &SubgroupSpec::borel_pm1(q))?;
        for delta in deltas {
            let genus = geometry::genus(&SubgroupSpec::borel(q, &delta)?)?;
            let threshold = delta.order() / 2 * genus;
            let verdict = if fiber.min() > threshold {
                Verdict::ForcedP1Parametrized
            } else {
                Verdict::Inconclusive
            };
            rows.push(ScreenRow {
                ell_n: q,
                delta_order: delta.order(),
                genus,
                fiber_min_degree: fiber.min(),
                threshold,
                verdict,
            });
        }
    }
    let r_ell = image_at(&r, ell)?;
    let genus_at_ell = if r_ell.has_full_det() {
        Some(geometry::genus(&r_ell)?)
    } else {
        None
    };
    let genus_zero_at_ell = genus_at_ell == Some(0);
    let fiber_survivor = rows
        .iter()
        .any(|row| row.verdict != Verdict::ForcedP1Parametrized);
    let verdict = if !fiber_survivor || genus_zero_at_ell {
        Verdict::ForcedP1Parametrized
    } else {
        Verdict::Inconclusive
    };
    Ok(ScreenReport {
        label: entry.label.clone(),
        ell,
        level_exponent: k,
        rows,
        genus_at_ell,
        genus_zero_at_ell,
        fiber_survivor,
        verdict,
    })
}

/// [`screen_entry_range`] starting at the entry's own level.
pub fn screen_entry(entry: &CatalogEntry, ell: Option<u32>, n_max: u32) -> Result<ScreenReport> {
    let (_, k) = entry_prime(entry, ell)?;
    if n_max < k.max(1) {
        return Err(Error::InvalidArgument(format!(
            "n_max = {n_max} is below the exponent {k} of level {}",
            entry.level
        )));
    }
    screen_entry_range(entry, ell, k, n_max)
}

/// Screens every entry in parallel; reports come back in input order.
pub fn screen_catalog(
    entries: &[CatalogEntry],
    ell: Option<u32>,
    n_max: u32,
) -> Vec<Result<ScreenReport>> {
    entries
        .par_iter()
        .map(|e| screen_entry(e, ell, n_max))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub ell_n: u32,
    pub delta_order: u64,
    pub genus: u64,
    /// `(#Δ/2)·genus(X_Δ(ℓⁿ))`.
    pub threshold: u64,
    /// Riemann–Roch screen for a point of `X_Δ(ℓⁿ)` of degree 1.
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table2Row {
    pub ell: u32,
    pub delta_order: u64,
    pub genus: u64,
    /// `ℓ(ℓ²−1)/#Δ`.
    pub bound: u64,
    /// Riemann–Roch screen for a point of degree `bound`.
    pub verdict: Verdict,
}

pub const TABLE1_MODULI: [u32; 3] = [25, 27, 32];
pub const TABLE2_PRIMES: [u32; 4] = [5, 7, 11, 13];

fn borel_genera(q: u32) -> Result<Vec<(u64, u64)>> {
    intermediate_unit_subgroups(q)
        .par_iter()
        .map(|d| Ok((d.order(), geometry::genus(&SubgroupSpec::borel(q, d)?)?)))
        .collect()
}

/// Intermediate curves `X_Δ(ℓⁿ)` for `ℓⁿ ∈ {25, 27, 32}`.
pub fn emit_table1() -> Result<Vec<Table1Row>> {
    let mut rows = Vec::new();
    for q in TABLE1_MODULI {
        for (delta_order, genus) in borel_genera(q)? {
            rows.push(Table1Row {
                ell_n: q,
                delta_order,
                genus,
                threshold: delta_order / 2 * genus,
                verdict: points::rr_screen(1, 1, genus),
            });
        }
    }
    Ok(rows)
}

/// Intermediate curves `X_Δ(ℓ²)` for `ℓ ≤ 13`, `ℓ ≥ 5`.
pub fn emit_table2() -> Result<Vec<Table2Row>> {
    let mut rows = Vec::new();
    for ell in TABLE2_PRIMES {
        for (delta_order, genus) in borel_genera(ell * ell)? {
            let bound = points::semidirect_lower_bound(ell, delta_order)?;
            rows.push(Table2Row {
                ell,
                delta_order,
                genus,
                bound,
                verdict: points::rr_screen(bound, 1, genus),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub n: u32,
    pub delta_order: u64,
    pub gl2_count: u64,
    pub gl2_formula: u64,
    pub borel_count: u64,
    pub borel_formula: u64,
    pub index_count: u64,
    pub index_formula: u64,
    pub ok: bool,
}

/// Counts `GL₂(ℤ/nℤ)` and every `B_Δ(n)` (Δ ∋ −1) by looping over all
/// matrices and compares with the closed forms, for `1 ≤ n ≤ max_n`.
pub fn verify_formulae(max_n: u32) -> Result<Vec<FormulaCheck>> {
    if max_n > 64 {
        return Err(Error::TooLarge { cap: 64 });
    }
    let per_n: Vec<Result<Vec<FormulaCheck>>> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let deltas = unit_subgroups_containing_minus_one(n);
            let borels: Vec<SubgroupSpec> = deltas
                .iter()
                .map(|d| SubgroupSpec::borel(n, d))
                .collect::<Result<_>>()?;
            let mut gl2_count = 0u64;
            let mut borel_counts = vec![0u64; borels.len()];
            let mut seen = HashSet::new();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let m = Mat2::new(n, a as i64, b as i64, c as i64, d as i64);
                            if !m.is_invertible() || !seen.insert(m) {
                                continue;
                            }
                            gl2_count += 1;
                            for (count, h) in borel_counts.iter_mut().zip(&borels) {
                                if h.contains(&m) {
                                    *count += 1;
                                }
                            }
                        }
                    }
                }
            }
            let gl2_formula = gl2_order(n);
            deltas
                .iter()
                .zip(borel_counts)
                .map(|(delta, borel_count)| {
                    let borel_formula = borel_order(n, delta.order());
                    let index_formula = borel_index(n, delta.order())?;
                    let index_count = gl2_count / borel_count;
                    let ok = gl2_count == gl2_formula
                        && borel_count == borel_formula
                        && index_count * borel_count == gl2_count
                        && index_count == index_formula;
                    Ok(FormulaCheck {
                        n,
                        delta_order: delta.order(),
                        gl2_count,
                        gl2_formula,
                        borel_count,
                        borel_formula,
                        index_count,
                        index_formula,
                        ok,
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for rows in per_n {
        out.extend(rows?);
    }
    Ok(out)
}
