//! `jetav` — exact verification and computation for jet groups and
//! AV-module bundles.
//!
//! Exit codes: 0 = pass, 1 = verification failure, 2 = usage or parse
//! error.

mod files;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use files::{
    parse_param_bindings, read_json, string_params, AtlasFile, Params, RepFile, TaskFile,
};
use jetav::avmod::{JetModule, RudakovModule};
use jetav::geometry::Point;
use jetav::jets::{aut_exp, aut_log, JetAutomorphism, JetDerivation};
use jetav::suites::{run_suite, SuiteConfig, SUITE_NAMES};
use jetav::{
    AvModule, CheckReport, DerivElt, Error, FnRing, MultiIndex, Rat, RingElem, TruncSeries,
    VectorField,
};

#[derive(Parser)]
#[command(
    name = "jetav",
    version,
    about = "Exact symbolic verification of jet groups, their representations, and AV-module bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named verification suite (see `--list`).
    Verify {
        /// Suite name; `all` runs every suite.
        suite: String,
        /// Truncation order.
        #[arg(long)]
        order: Option<u32>,
        /// Random seed; defaults to $JETAV_SEED or 2024.
        #[arg(long)]
        seed: Option<u64>,
        /// Sample count for property checks.
        #[arg(long)]
        samples: Option<u64>,
        /// Degree cutoff for point-supported module elements.
        #[arg(long)]
        cutoff: Option<u32>,
        /// Maximum polynomial degree of sampled functions.
        #[arg(long)]
        degree: Option<u32>,
        /// Integer parameter range `A..B` (inclusive) for the built-in
        /// families.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        m_range: Option<(i64, i64)>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Also write the structured (JSON) report to a file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// List the available suites and exit.
        #[arg(long)]
        list: bool,
    },
    /// Execute a single computation described by a task file.
    Compute {
        task: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a representation or atlas file.
    Parse {
        file: PathBuf,
        /// `rep` or `atlas`; inferred from the file's `kind` field when
        /// omitted.
        #[arg(long)]
        kind: Option<String>,
        /// Parameter bindings `name=value` for representation files.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("`{s}` is not a range A..B"))?;
    let lo: i64 = lo.parse().map_err(|e| format!("bad range start: {e}"))?;
    let hi: i64 = hi.parse().map_err(|e| format!("bad range end: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn default_seed() -> u64 {
    std::env::var("JETAV_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(2024)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> jetav::Result<ExitCode> {
    match cli.command {
        Cmd::Verify {
            suite,
            order,
            seed,
            samples,
            cutoff,
            degree,
            m_range,
            format,
            out,
            list,
        } => {
            if list {
                for name in SUITE_NAMES {
                    println!("{name}");
                }
                println!("all");
                return Ok(ExitCode::SUCCESS);
            }
            let defaults = SuiteConfig::default();
            let cfg = SuiteConfig {
                order: order.unwrap_or(defaults.order),
                seed: seed.unwrap_or_else(default_seed),
                samples: samples.unwrap_or(defaults.samples),
                cutoff: cutoff.unwrap_or(defaults.cutoff),
                degree: degree.unwrap_or(defaults.degree),
                m_lo: m_range.map(|r| r.0).unwrap_or(defaults.m_lo),
                m_hi: m_range.map(|r| r.1).unwrap_or(defaults.m_hi),
            };
            if cfg.order < 1 || cfg.samples < 1 {
                return Err(Error::parse(0, 0, "order and samples must be at least 1"));
            }
            let report = run_suite(&suite, &cfg)?;
            emit_report(&report, format, out.as_deref())?;
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Compute { task, format, out } => {
            let spec: TaskFile = read_json(&task)?;
            let base = task.parent().unwrap_or(Path::new("."));
            let lines = execute_task(&spec, base)?;
            let text = lines.join("\n");
            match format {
                Format::Text => println!("{text}"),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({ "result": lines }))
                        .expect("serializable")
                ),
            }
            if let Some(path) = out {
                let json =
                    serde_json::to_string_pretty(&serde_json::json!({ "result": lines }))
                        .expect("serializable");
                std::fs::write(&path, json).map_err(|e| {
                    Error::parse(0, 0, format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Parse {
            file,
            kind,
            params,
            format,
            out,
        } => {
            let params = parse_param_bindings(&params)?;
            let (report, canonical) = parse_and_validate(&file, kind.as_deref(), &params)?;
            match format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => println!("{canonical}"),
            }
            if let Some(path) = out {
                std::fs::write(&path, &canonical).map_err(|e| {
                    Error::parse(0, 0, format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn emit_report(report: &CheckReport, format: Format, out: Option<&Path>) -> jetav::Result<()> {
    match format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(report).expect("serializable")
        ),
    }
    if let Some(path) = out {
        let json = serde_json::to_string_pretty(report).expect("serializable");
        std::fs::write(path, json)
            .map_err(|e| Error::parse(0, 0, format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

/// Parse a representation or atlas file, run its validator, and return the
/// report together with the canonical re-serialization.
fn parse_and_validate(
    path: &Path,
    kind: Option<&str>,
    params: &Params,
) -> jetav::Result<(CheckReport, String)> {
    let kind = match kind {
        Some(k) => k.to_string(),
        None => {
            let value: serde_json::Value = read_json(path)?;
            value
                .get("kind")
                .and_then(|k| k.as_str())
                .ok_or_else(|| {
                    Error::parse(0, 0, format!("{}: missing `kind` field", path.display()))
                })?
                .to_string()
        }
    };
    match kind.as_str() {
        "rep" | "representation" => {
            let file = RepFile::load(path)?;
            let canonical =
                serde_json::to_string_pretty(&file).expect("serializable");
            // instantiate with the bound parameters, or 1 for any unbound
            let mut bound = params.clone();
            for p in &file.params {
                bound.entry(p.clone()).or_insert_with(Rat::one);
            }
            let rep = file.instantiate(&bound);
            let report = match rep {
                Ok(rep) => {
                    let mut r = rep.validate();
                    r.note(format!(
                        "representation `{}`: dim {}, nilpotency order {}",
                        rep.name(),
                        rep.dim(),
                        rep.nilpotency_order()
                    ));
                    for ((s, dir), m) in rep.generators() {
                        r.note(format!(
                            "{} -> {}",
                            files::render_generator_key(s, *dir, rep.nvars()),
                            m.render(|r| r.to_string())
                        ));
                    }
                    r
                }
                Err(e) => {
                    let mut r = CheckReport::new(format!("parse_rep({})", file.name));
                    r.require("representation instantiates", false, e.to_string());
                    r
                }
            };
            Ok((report, canonical))
        }
        "atlas" => {
            let file = AtlasFile::load(path)?;
            let canonical =
                serde_json::to_string_pretty(&file).expect("serializable");
            let atlas = file.instantiate()?;
            Ok((atlas.validate(), canonical))
        }
        other => Err(Error::parse(
            0,
            0,
            format!("unknown file kind `{other}` (expected rep or atlas)"),
        )),
    }
}

fn jet_names(n: usize) -> Vec<String> {
    TruncSeries::default_names(n, 'X')
}

fn execute_task(task: &TaskFile, base: &Path) -> jetav::Result<Vec<String>> {
    match task {
        TaskFile::Exp {
            order,
            components,
            params,
        } => {
            let params = string_params(params)?;
            let n = components.len();
            let comps = components
                .iter()
                .map(|c| files::parse_jet_poly(c, n, *order, &params))
                .collect::<jetav::Result<Vec<_>>>()?;
            let d = JetDerivation::new(comps)?;
            let f = aut_exp(&d)?;
            Ok(render_automorphism(&f))
        }
        TaskFile::Log {
            order,
            images,
            params,
        } => {
            let params = string_params(params)?;
            let n = images.len();
            let imgs = images
                .iter()
                .map(|c| files::parse_jet_poly(c, n, *order, &params))
                .collect::<jetav::Result<Vec<_>>>()?;
            let f = JetAutomorphism::from_images(imgs)?;
            let d = aut_log(&f)?;
            Ok(vec![d.render(&jet_names(n))])
        }
        TaskFile::GlueMatrix {
            atlas,
            from,
            to,
            rep,
            order,
            params,
        } => {
            let params = string_params(params)?;
            let atlas = AtlasFile::load(&base.join(atlas))?.instantiate()?;
            let report = atlas.validate();
            if !report.passed {
                return Err(Error::ValidationFailed(format!(
                    "atlas `{}` failed validation",
                    atlas.name
                )));
            }
            let t = atlas
                .transition(from, to)
                .ok_or_else(|| Error::parse(0, 0, format!("no transition {from} -> {to}")))?;
            let rep = RepFile::load(&base.join(rep))?.instantiate(&params)?;
            let glue = jetav::jet_glue_matrix(&rep, t, *order)?;
            let mut lines = vec![format!(
                "glue matrix of {} along {} -> {} at order {order}:",
                rep.name(),
                from,
                to
            )];
            lines.push(glue.render(RingElem::render));
            for i in 0..rep.dim() {
                let col: Vec<String> = (0..rep.dim())
                    .filter(|&j| !glue.at(j, i).is_zero())
                    .map(|j| format!("({}) e_{}^{from}", glue.at(j, i).render(), j + 1))
                    .collect();
                lines.push(format!(
                    "e_{}^{to} = {}",
                    i + 1,
                    if col.is_empty() { "0".into() } else { col.join(" + ") }
                ));
            }
            Ok(lines)
        }
        TaskFile::JetAction {
            rep,
            chart_vars,
            field_coefficient,
            field_direction,
            section,
            params,
        } => {
            let params = string_params(params)?;
            let rep = RepFile::load(&base.join(rep))?.instantiate(&params)?;
            let vars: Vec<&str> = chart_vars.iter().map(String::as_str).collect();
            let ring = FnRing::poly_ring(&vars);
            let f = jetav::expr::parse_elem(field_coefficient, &ring, &params)?;
            let dir = field_direction
                .checked_sub(1)
                .filter(|d| *d < ring.nvars())
                .ok_or_else(|| Error::parse(0, 0, "field direction out of range"))?;
            let coeffs = section
                .iter()
                .map(|c| jetav::expr::parse_elem(c, &ring, &params))
                .collect::<jetav::Result<Vec<_>>>()?;
            let module = JetModule::new(rep, ring);
            let out = module.action(&VectorField::single(f, dir), &coeffs)?;
            let cells: Vec<String> = out.iter().map(RingElem::render).collect();
            Ok(vec![format!("({})", cells.join(", "))])
        }
        TaskFile::RudakovAct {
            rep,
            chart_vars,
            point,
            generator_kind,
            generator_coefficient,
            generator_direction,
            element,
            params,
        } => {
            let params = string_params(params)?;
            let rep = RepFile::load(&base.join(rep))?.instantiate(&params)?;
            let vars: Vec<&str> = chart_vars.iter().map(String::as_str).collect();
            let ring = FnRing::poly_ring(&vars);
            let coords = point
                .iter()
                .map(|c| c.parse::<Rat>())
                .collect::<jetav::Result<Vec<_>>>()?;
            let p = Point::new(&ring, coords)?;
            let module = RudakovModule::new(rep.clone(), p, 8)?;
            let mut elt = DerivElt::zero(rep.dim());
            for term in element {
                let vector = term
                    .vector
                    .iter()
                    .map(|v| v.parse::<Rat>())
                    .collect::<jetav::Result<Vec<_>>>()?;
                elt.add_term(MultiIndex::new(term.exponents.clone()), vector);
            }
            let g = jetav::expr::parse_elem(generator_coefficient, &ring, &params)?;
            let out = match generator_kind.as_str() {
                "function" => module.act_fn(&g, &elt)?,
                "field" => {
                    let dir = generator_direction
                        .checked_sub(1)
                        .filter(|d| *d < ring.nvars())
                        .ok_or_else(|| Error::parse(0, 0, "generator direction out of range"))?;
                    module.act_field(&VectorField::single(g, dir), &elt)?
                }
                other => {
                    return Err(Error::parse(
                        0,
                        0,
                        format!("generator kind `{other}` (expected function or field)"),
                    ))
                }
            };
            Ok(vec![module.render(&out)])
        }
        TaskFile::Transform {
            atlas,
            from,
            to,
            order,
            components,
            params,
        } => {
            let params = string_params(params)?;
            let atlas = AtlasFile::load(&base.join(atlas))?.instantiate()?;
            let t = atlas
                .transition(from, to)
                .ok_or_else(|| Error::parse(0, 0, format!("no transition {from} -> {to}")))?;
            let n = components.len();
            if n != t.nvars() {
                return Err(Error::parse(0, 0, "component count vs chart dimension"));
            }
            let to_ctx = jetav::SeriesCtx::new(t.overlap_to().clone(), n, *order);
            let comps = components
                .iter()
                .map(|c| {
                    let series = files::parse_jet_poly(c, n, *order, &params)?;
                    series.map_coeffs(&to_ctx, |r| {
                        Ok(RingElem::constant(
                            t.overlap_to(),
                            r.as_rat().expect("rational coefficient"),
                        ))
                    })
                })
                .collect::<jetav::Result<Vec<_>>>()?;
            let d = JetDerivation::new(comps)?;
            let out = t.transform_derivation(&d, *order)?;
            Ok(vec![out.render(&TruncSeries::default_names(n, 'Y'))])
        }
    }
}

fn render_automorphism(f: &JetAutomorphism) -> Vec<String> {
    let names = jet_names(f.ctx().nvars);
    f.images()
        .iter()
        .enumerate()
        .map(|(i, im)| format!("{} -> {}", names[i], im.render(&names)))
        .collect()
}
