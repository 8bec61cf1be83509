mod output;
mod spec;

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modcurve_core::catalog::{self, CatalogEntry, ScreenReport};
use modcurve_core::points::{self, GaloisImageContext};
use modcurve_core::{geometry, CurveData, Error, SubgroupSpec};
use serde_json::{json, Value};

use output::Record;

#[derive(Parser)]
#[command(
    name = "modcurve",
    version,
    about = "Subgroups of GL2(Z/NZ), modular curve genera and point degrees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, help = format!("Subgroup H: {}", spec::SPEC_HELP))]
    group: Option<String>,

    /// Galois image R, same syntax as --group [default: full]
    #[arg(long, global = true)]
    image: Option<String>,

    /// Larger group for map-degree, same syntax as --group
    #[arg(long, global = true)]
    over: Option<String>,

    /// Work modulo N: lift every group to N (and size `full`)
    #[arg(long, global = true, value_name = "N")]
    modulus: Option<u32>,

    /// Catalog file (one JSON object per line)
    #[arg(long, global = true, value_name = "PATH")]
    catalog: Option<PathBuf>,

    /// Degree [Q(j):Q] of the j-invariant
    #[arg(long, global = true, default_value_t = 1, value_name = "D")]
    dj: u64,

    /// Largest exponent n screened at level l^n
    #[arg(long, global = true, value_name = "N")]
    nmax: Option<u32>,

    /// One JSON object per line instead of a table
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Order of H
    Order,
    /// Index of H in GL2(Z/NZ)
    Index,
    /// Level of H
    Level,
    /// Index, elliptic points, cusps and genus of X_H
    Genus,
    /// Label prefix level.index.genus with a generator digest
    Label,
    /// Degree of X_H -> X_H' for H (--group) inside H' (--over)
    MapDegree,
    /// Degree of the point of X_H attached to the image R
    PointDegree {
        /// Number of geometric components of X_H
        #[arg(long, default_value_t = 1)]
        components: u64,
    },
    /// Degrees of all points of X_H above the j-invariant
    FiberDegrees,
    /// Compare [R∩H' : R∩H] with [H' : H], H' the preimage of H mod M
    ReduceLevel {
        #[arg(long, value_name = "M")]
        sub_modulus: u32,
    },
    /// Screen catalog images over the intermediate curves X_Delta(l^n)
    Screen {
        /// Prime for level-1 entries
        #[arg(long)]
        ell: Option<u32>,
        /// Smallest exponent n screened [default: the entry's own]
        #[arg(long)]
        nmin: Option<u32>,
        /// Only screen this entry
        #[arg(long)]
        label: Option<String>,
    },
    /// Genera of X_Delta(l^n) for l^n in {25, 27, 32}
    Table1,
    /// Genera of X_Delta(l^2) for 5 <= l <= 13 with the bound l(l^2-1)/#Delta
    Table2,
    /// Brute-force check of the GL2 and Borel order/index formulas
    VerifyFormulae {
        #[arg(long, default_value_t = 16)]
        max: u32,
    },
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

struct Output {
    headers: Option<&'static [&'static str]>,
    records: Vec<Record>,
}

impl From<Vec<Record>> for Output {
    fn from(records: Vec<Record>) -> Self {
        Output {
            headers: None,
            records,
        }
    }
}

struct Context {
    catalog: Option<Vec<CatalogEntry>>,
}

impl Context {
    fn load(cli: &Cli) -> Result<Self, Failure> {
        let catalog = match &cli.catalog {
            Some(path) => {
                let file = File::open(path)
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                Some(catalog::parse_catalog(BufReader::new(file))?)
            }
            None => None,
        };
        Ok(Context { catalog })
    }

    fn group(
        &self,
        spec: Option<&str>,
        flag: &str,
        modulus: Option<u32>,
    ) -> Result<SubgroupSpec, Failure> {
        let spec = spec.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required")))?;
        Ok(spec::parse_group(spec, modulus, self.catalog.as_deref())?)
    }

    fn image(&self, cli: &Cli, modulus: u32) -> Result<GaloisImageContext, Failure> {
        let r = self.group(
            Some(cli.image.as_deref().unwrap_or("full")),
            "image",
            Some(modulus),
        )?;
        Ok(GaloisImageContext::new(r, cli.dj)?)
    }
}

fn curve_record(h: &SubgroupSpec, data: &CurveData) -> Record {
    vec![
        ("level", json!(h.adjoin_minus_i().level())),
        ("index", json!(data.mu)),
        ("nu2", json!(data.nu2)),
        ("nu3", json!(data.nu3)),
        ("nu_inf", json!(data.nu_inf)),
        ("genus", json!(data.genus)),
        ("adjoined_minus_i", json!(data.adjoined_minus_i)),
    ]
}

fn screen_records(report: &ScreenReport) -> Vec<Record> {
    let entry: Record = vec![
        ("label", json!(report.label)),
        ("ell", json!(report.ell)),
        ("genus_at_ell", json!(report.genus_at_ell)),
        ("fiber_survivor", json!(report.fiber_survivor)),
        ("verdict", json!(report.verdict.as_str())),
    ];
    if report.rows.is_empty() {
        let mut r = entry;
        for key in [
            "ell_n",
            "delta_order",
            "genus",
            "fiber_min_degree",
            "threshold",
            "row_verdict",
        ] {
            r.insert(r.len() - 3, (key, Value::Null));
        }
        return vec![r];
    }
    report
        .rows
        .iter()
        .map(|row| {
            let mut r = entry.clone();
            let fields = [
                ("ell_n", json!(row.ell_n)),
                ("delta_order", json!(row.delta_order)),
                ("genus", json!(row.genus)),
                ("fiber_min_degree", json!(row.fiber_min_degree)),
                ("threshold", json!(row.threshold)),
                ("row_verdict", json!(row.verdict.as_str())),
            ];
            for f in fields {
                r.insert(r.len() - 3, f);
            }
            r
        })
        .collect()
}

const TABLE1_HEADERS: &[&str] = &[
    "ell^n",
    "#Delta",
    "genus(X_Delta(ell^n))",
    "(#Delta/2)genus(X_Delta(ell^n))",
    "verdict",
];
const TABLE2_HEADERS: &[&str] = &[
    "ell",
    "#Delta",
    "genus(X_Delta(ell^2))",
    "ell(ell^2-1)/#Delta",
    "verdict",
];

fn run(cli: &Cli) -> Result<Output, Failure> {
    let ctx = Context::load(cli)?;
    let group = || ctx.group(cli.group.as_deref(), "group", cli.modulus);
    Ok(match &cli.command {
        Command::Order => {
            let h = group()?;
            vec![vec![
                ("modulus", json!(h.modulus())),
                ("order", json!(h.order()?)),
            ]]
            .into()
        }
        Command::Index => {
            let h = group()?;
            vec![vec![
                ("modulus", json!(h.modulus())),
                ("index", json!(h.index_in_gl2()?)),
            ]]
            .into()
        }
        Command::Level => {
            let h = group()?;
            vec![vec![
                ("modulus", json!(h.modulus())),
                ("level", json!(h.level())),
            ]]
            .into()
        }
        Command::Genus => {
            let h = group()?;
            vec![curve_record(&h, &geometry::curve_data(&h)?)].into()
        }
        Command::Label => {
            let h = group()?;
            vec![vec![("label", json!(geometry::label_prefix(&h)?))]].into()
        }
        Command::MapDegree => {
            let h1 = group()?;
            let h2 = ctx.group(cli.over.as_deref(), "over", cli.modulus)?;
            vec![vec![("degree", json!(geometry::map_degree(&h1, &h2)?))]].into()
        }
        Command::PointDegree { components } => {
            let h = group()?;
            let image = ctx.image(cli, h.modulus())?;
            let report = points::point_report(&image, &h, *components)?;
            vec![vec![
                ("degree", json!(report.degree)),
                ("image_index", json!(report.image_index)),
                ("curve_index", json!(report.curve_index)),
                ("genus", json!(report.genus)),
                ("components", json!(report.components)),
                ("screen", json!(report.screen.as_str())),
                ("fiber_degrees", json!(report.fiber_degrees)),
                ("adjoined_minus_i", json!(report.adjoined_minus_i)),
            ]]
            .into()
        }
        Command::FiberDegrees => {
            let h = group()?;
            let image = ctx.image(cli, h.modulus())?;
            let fiber = points::fiber_degrees(&image, &h)?;
            vec![vec![
                ("points", json!(fiber.degrees.len())),
                ("min_degree", json!(fiber.min())),
                ("identity_degree", json!(fiber.identity_degree)),
                ("cosets", json!(fiber.total_cosets)),
                ("degrees", json!(fiber.degrees)),
            ]]
            .into()
        }
        Command::ReduceLevel { sub_modulus } => {
            let h = group()?;
            let image = ctx.image(cli, h.modulus())?;
            let lr = points::level_reduction(&image, &h, *sub_modulus)?;
            vec![vec![
                ("modulus", json!(h.modulus())),
                ("sub_modulus", json!(lr.sub_modulus)),
                ("lhs", json!(lr.lhs)),
                ("rhs", json!(lr.rhs)),
                ("equal", json!(lr.equal)),
                ("image_level", json!(lr.image_level)),
                ("hypothesis_holds", json!(lr.hypothesis_holds)),
                ("note", json!(lr.note)),
            ]]
            .into()
        }
        Command::Screen { ell, nmin, label } => {
            let entries = ctx
                .catalog
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("--catalog is required".into()))?;
            let n_max = cli
                .nmax
                .ok_or_else(|| Error::InvalidArgument("--nmax is required".into()))?;
            let selected: Vec<CatalogEntry> = match label {
                Some(l) => vec![catalog::find_entry(entries, l)?.clone()],
                None => entries.to_vec(),
            };
            let reports: Vec<_> = match nmin {
                Some(n_min) => selected
                    .iter()
                    .map(|e| catalog::screen_entry_range(e, *ell, *n_min, n_max))
                    .collect(),
                None => catalog::screen_catalog(&selected, *ell, n_max),
            };
            let mut records = Vec::new();
            for report in reports {
                records.extend(screen_records(&report?));
            }
            records.into()
        }
        Command::Table1 => Output {
            headers: Some(TABLE1_HEADERS),
            records: catalog::emit_table1()?
                .iter()
                .map(|r| {
                    vec![
                        ("ell_n", json!(r.ell_n)),
                        ("delta_order", json!(r.delta_order)),
                        ("genus", json!(r.genus)),
                        ("threshold", json!(r.threshold)),
                        ("verdict", json!(r.verdict.as_str())),
                    ]
                })
                .collect(),
        },
        Command::Table2 => Output {
            headers: Some(TABLE2_HEADERS),
            records: catalog::emit_table2()?
                .iter()
                .map(|r| {
                    vec![
                        ("ell", json!(r.ell)),
                        ("delta_order", json!(r.delta_order)),
                        ("genus", json!(r.genus)),
                        ("bound", json!(r.bound)),
                        ("verdict", json!(r.verdict.as_str())),
                    ]
                })
                .collect(),
        },
        Command::VerifyFormulae { max } => catalog::verify_formulae(*max)?
            .iter()
            .map(|c| {
                vec![
                    ("n", json!(c.n)),
                    ("delta_order", json!(c.delta_order)),
                    ("gl2_count", json!(c.gl2_count)),
                    ("gl2_formula", json!(c.gl2_formula)),
                    ("borel_count", json!(c.borel_count)),
                    ("borel_formula", json!(c.borel_formula)),
                    ("index_count", json!(c.index_count)),
                    ("index_formula", json!(c.index_formula)),
                    ("ok", json!(c.ok)),
                ]
            })
            .collect::<Vec<_>>()
            .into(),
    })
}

fn exit_code(e: &Error) -> u8 {
    if e.is_parse() || matches!(e, Error::InvalidArgument(_)) {
        2
    } else if e.is_cap() {
        3
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        let mut stdout = io::stdout().lock();
        match out.headers {
            Some(h) => output::emit_with_headers(h, &out.records, cli.json, &mut stdout)?,
            None => output::emit(&out.records, cli.json, &mut stdout)?,
        }
        stdout.flush()?;
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
