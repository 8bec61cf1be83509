//! Parsing of `--group` / `--image` family specifications.

use modcurve_core::catalog::{self, CatalogEntry};
use modcurve_core::zmod::{check_modulus, UnitSubgroup};
use modcurve_core::{Error, Mat2, Result, SubgroupSpec};

pub const SPEC_HELP: &str = "\
full[:N] | borel:N:g1,g2,.. | b0:N | b1:N | cns:l:d | cnspre:l:d | kernel:N:M | \
gens:N:a,b,c,d;a,b,c,d;.. | file:LABEL";

fn bad(spec: &str, why: &str) -> Error {
    Error::InvalidArgument(format!("group spec {spec:?}: {why}"))
}

fn number(spec: &str, field: &str) -> Result<u32> {
    let v: u64 = field
        .trim()
        .parse()
        .map_err(|_| bad(spec, &format!("{field:?} is not a number")))?;
    check_modulus(v)
}

fn integers(spec: &str, list: &str) -> Result<Vec<i64>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| bad(spec, &format!("{s:?} is not an integer")))
        })
        .collect()
}

/// Builds the subgroup named by `spec`. `modulus` supplies the modulus of
/// `full` and, for every other family, a multiple to lift to.
pub fn parse_group(
    spec: &str,
    modulus: Option<u32>,
    catalog: Option<&[CatalogEntry]>,
) -> Result<SubgroupSpec> {
    let parts: Vec<&str> = spec.splitn(3, ':').collect();
    let group = match parts.as_slice() {
        ["full"] => SubgroupSpec::full(modulus.unwrap_or(1)),
        ["full", n] => SubgroupSpec::full(number(spec, n)?),
        ["borel", n, gens] => {
            let n = number(spec, n)?;
            let delta = UnitSubgroup::generated_by(n, &integers(spec, gens)?)?;
            SubgroupSpec::borel(n, &delta)?
        }
        ["b0", n] => SubgroupSpec::borel0(number(spec, n)?),
        ["b1", n] => SubgroupSpec::borel_pm1(number(spec, n)?),
        ["cns", l, d] | ["cnspre", l, d] => {
            let (l, d) = (number(spec, l)?, number(spec, d)?);
            let q = (l as u64)
                .checked_pow(d)
                .ok_or_else(|| bad(spec, "modulus overflow"))?;
            let q = check_modulus(q)?;
            if parts[0] == "cns" {
                SubgroupSpec::nonsplit_cartan_normalizer(q)?
            } else {
                SubgroupSpec::cns_full_preimage(q)?
            }
        }
        ["kernel", n, m] => SubgroupSpec::kernel(number(spec, n)?, number(spec, m)?)?,
        ["gens", n, rows] => {
            let n = number(spec, n)?;
            let mut gens = Vec::new();
            for row in rows.split(';').filter(|r| !r.trim().is_empty()) {
                let entries: [i64; 4] = integers(spec, row)?
                    .try_into()
                    .map_err(|_| bad(spec, &format!("{row:?} does not have four entries")))?;
                gens.push(Mat2::from_row_major(n, entries));
            }
            SubgroupSpec::generated(n, gens)?
        }
        ["file", label] => {
            let entries = catalog.ok_or_else(|| bad(spec, "--catalog is required"))?;
            catalog::find_entry(entries, label)?.to_subgroup()?
        }
        _ => return Err(bad(spec, &format!("expected one of {SPEC_HELP}"))),
    };
    match modulus {
        Some(m) if m != group.modulus() => group.lift(m),
        _ => Ok(group),
    }
}
