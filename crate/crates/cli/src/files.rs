//! On-disk formats: representations, atlases and task files.
//!
//! All numbers are strings holding exact rationals (`-3/2`) or expressions
//! in the declared variables and parameters, parsed by the expression
//! grammar documented in `jetav::expr`. Parameters (like the `m` of the
//! built-in families) are instantiated with integers supplied on the
//! command line.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use jetav::expr::parse_elem;
use jetav::geometry::{Atlas, Chart, Transition};
use jetav::idx::MultiIndex;
use jetav::matrix::{Matrix, QMatrix};
use jetav::repn::RepSpec;
use jetav::{Error, FnRing, Poly, Rat, Result, RingElem};

pub type Params = BTreeMap<String, Rat>;

/// Representation file: generator matrices keyed by `X^s d/dX_i` strings,
/// integer weights per basis vector, optional weight basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub kind: String,
    pub name: String,
    pub nvars: usize,
    pub dim: usize,
    pub nilpotency_order: u32,
    #[serde(default)]
    pub params: Vec<String>,
    pub generators: BTreeMap<String, Vec<Vec<String>>>,
    pub weights: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_basis: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartFile {
    pub name: String,
    pub coords: Vec<String>,
    #[serde(default)]
    pub denominators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionFile {
    pub from: String,
    pub to: String,
    pub maps: Vec<String>,
    pub inverse_maps: Vec<String>,
    #[serde(default)]
    pub overlap_denominators_from: Vec<String>,
    #[serde(default)]
    pub overlap_denominators_to: Vec<String>,
}

/// Atlas file: charts with localized coordinate rings plus transitions
/// with explicit overlap denominators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasFile {
    pub kind: String,
    pub name: String,
    pub charts: Vec<ChartFile>,
    pub transitions: Vec<TransitionFile>,
}

/// A single computation request for `jetav compute`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case")]
pub enum TaskFile {
    /// Exponential of a derivation with polynomial components.
    Exp {
        order: u32,
        /// Component `i` is the coefficient of `d/dX_(i+1)`, a polynomial
        /// in the jet variables.
        components: Vec<String>,
        #[serde(default)]
        params: BTreeMap<String, String>,
    },
    /// Logarithm of a unipotent automorphism given by its images.
    Log {
        order: u32,
        images: Vec<String>,
        #[serde(default)]
        params: BTreeMap<String, String>,
    },
    /// Gluing matrix of a representation along an atlas transition.
    GlueMatrix {
        atlas: String,
        from: String,
        to: String,
        rep: String,
        order: u32,
        #[serde(default)]
        params: BTreeMap<String, String>,
    },
    /// Action of a vector field on a jet-module section over a chart.
    JetAction {
        rep: String,
        chart_vars: Vec<String>,
        field_coefficient: String,
        /// 1-based direction of `d/dx_i`.
        field_direction: usize,
        section: Vec<String>,
        #[serde(default)]
        params: BTreeMap<String, String>,
    },
    /// Action of a function or field generator on a Rudakov element.
    RudakovAct {
        rep: String,
        chart_vars: Vec<String>,
        point: Vec<String>,
        /// `function` or `field`.
        generator_kind: String,
        generator_coefficient: String,
        /// 1-based direction, ignored for functions.
        #[serde(default)]
        generator_direction: usize,
        element: Vec<RudakovTerm>,
        #[serde(default)]
        params: BTreeMap<String, String>,
    },
    /// Transport a virtual jet along an atlas transition.
    Transform {
        atlas: String,
        from: String,
        to: String,
        order: u32,
        /// Polynomial components in the to-chart jet variables.
        components: Vec<String>,
        #[serde(default)]
        params: BTreeMap<String, String>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RudakovTerm {
    pub exponents: Vec<u32>,
    pub vector: Vec<String>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        line: 0,
        col: 0,
        message: format!("{}: {e}", path.display()),
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        message: format!("{}: {e}", path.display()),
    })
}

/// Parse `m=3`-style command line parameter bindings.
pub fn parse_param_bindings(bindings: &[String]) -> Result<Params> {
    let mut out = Params::new();
    for b in bindings {
        let (name, value) = b.split_once('=').ok_or_else(|| {
            Error::parse(0, 0, format!("parameter binding `{b}` is not name=value"))
        })?;
        out.insert(name.trim().to_string(), value.trim().parse()?);
    }
    Ok(out)
}

fn const_rat(src: &str, params: &Params) -> Result<Rat> {
    let ring = FnRing::rationals();
    let e = parse_elem(src, &ring, params)?;
    e.as_rat()
        .ok_or_else(|| Error::parse(0, 0, format!("`{src}` is not constant")))
}

fn const_int(src: &str, params: &Params) -> Result<i64> {
    const_rat(src, params)?
        .to_integer()
        .ok_or_else(|| Error::parse(0, 0, format!("`{src}` is not an integer")))
}

/// Parse a generator key like `X d/dX`, `X^2 d/dX` or `X_1 X_2^2 d/dX_1`
/// into the monomial exponent and the 0-based direction.
pub fn parse_generator_key(key: &str, nvars: usize) -> Result<(MultiIndex, usize)> {
    let bad = |msg: &str| Error::parse(0, 0, format!("generator key `{key}`: {msg}"));
    let (mono_part, dir_part) = match key.rfind("d/d") {
        Some(pos) => (key[..pos].trim(), key[pos + 3..].trim()),
        None => return Err(bad("missing d/dX_i part")),
    };
    let var_index = |name: &str| -> Result<usize> {
        if nvars == 1 && name == "X" {
            return Ok(0);
        }
        let idx = name
            .strip_prefix("X_")
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| bad("expected X or X_i"))?;
        if idx == 0 || idx > nvars {
            return Err(bad("direction out of range"));
        }
        Ok(idx - 1)
    };
    let direction = var_index(dir_part)?;
    let mut exps = vec![0u32; nvars];
    for factor in mono_part.split([' ', '*']).filter(|f| !f.is_empty()) {
        let (name, power) = match factor.split_once('^') {
            Some((n, p)) => (
                n,
                p.parse::<u32>()
                    .map_err(|_| bad("bad exponent"))?,
            ),
            None => (factor, 1),
        };
        exps[var_index(name)?] += power;
    }
    let idx = MultiIndex::new(exps);
    if idx.degree() == 0 {
        return Err(bad("monomial part must be nonconstant"));
    }
    Ok((idx, direction))
}

/// Render a generator key in the file syntax.
pub fn render_generator_key(s: &MultiIndex, dir: usize, nvars: usize) -> String {
    let var = |j: usize| {
        if nvars == 1 {
            "X".to_string()
        } else {
            format!("X_{}", j + 1)
        }
    };
    let mut parts = Vec::new();
    for j in 0..nvars {
        match s.get(j) {
            0 => {}
            1 => parts.push(var(j)),
            e => parts.push(format!("{}^{e}", var(j))),
        }
    }
    format!("{} d/d{}", parts.join(" "), var(dir))
}

impl RepFile {
    pub fn load(path: &Path) -> Result<RepFile> {
        let file: RepFile = read_json(path)?;
        if file.kind != "representation" {
            return Err(Error::parse(
                0,
                0,
                format!("{}: kind must be `representation`", path.display()),
            ));
        }
        Ok(file)
    }

    /// Instantiate the parameters and build a validated representation.
    /// Validation failures are returned with the first finding.
    pub fn instantiate(&self, params: &Params) -> Result<RepSpec> {
        for p in &self.params {
            if !params.contains_key(p) {
                return Err(Error::parse(
                    0,
                    0,
                    format!("parameter `{p}` required by `{}` is not bound", self.name),
                ));
            }
        }
        let mut generators = BTreeMap::new();
        for (key, rows) in &self.generators {
            let (s, dir) = parse_generator_key(key, self.nvars)?;
            let m = self.parse_matrix(rows, params)?;
            generators.insert((s, dir), m);
        }
        let mut weights = Vec::with_capacity(self.dim);
        for row in &self.weights {
            if row.len() != self.nvars {
                return Err(Error::parse(0, 0, "weight row arity".to_string()));
            }
            weights.push(
                row.iter()
                    .map(|w| const_int(w, params))
                    .collect::<Result<Vec<i64>>>()?,
            );
        }
        let basis = match &self.weight_basis {
            Some(rows) => self.parse_matrix(rows, params)?,
            None => Matrix::identity(self.dim, &Rat::zero()),
        };
        let mut name = self.name.clone();
        if !self.params.is_empty() {
            let bound: Vec<String> = self
                .params
                .iter()
                .map(|p| format!("{p}={}", params[p]))
                .collect();
            name = format!("{name}[{}]", bound.join(","));
        }
        RepSpec::new(
            name,
            self.nvars,
            self.dim,
            self.nilpotency_order,
            generators,
            weights,
            basis,
        )
    }

    fn parse_matrix(&self, rows: &[Vec<String>], params: &Params) -> Result<QMatrix> {
        if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
            return Err(Error::parse(
                0,
                0,
                format!("matrices in `{}` must be {}x{}", self.name, self.dim, self.dim),
            ));
        }
        let mut data = Vec::with_capacity(self.dim);
        for row in rows {
            let mut out = Vec::with_capacity(self.dim);
            for cell in row {
                out.push(const_rat(cell, params)?);
            }
            data.push(out);
        }
        Ok(Matrix::from_rows(data))
    }
}

fn parse_denominator(src: &str, ring: &Arc<FnRing>) -> Result<Poly> {
    let elem = parse_elem(src, ring, &Params::new())?;
    if elem.den_exps().iter().any(|&e| e > 0) {
        return Err(Error::parse(
            0,
            0,
            format!("denominator `{src}` must be polynomial"),
        ));
    }
    Ok(elem.numerator().clone())
}

impl AtlasFile {
    pub fn load(path: &Path) -> Result<AtlasFile> {
        let file: AtlasFile = read_json(path)?;
        if file.kind != "atlas" {
            return Err(Error::parse(
                0,
                0,
                format!("{}: kind must be `atlas`", path.display()),
            ));
        }
        Ok(file)
    }

    /// Build the atlas; transitions are constructed but not yet validated.
    pub fn instantiate(&self) -> Result<Atlas> {
        let mut charts = Vec::new();
        for c in &self.charts {
            let coords: Vec<&str> = c.coords.iter().map(String::as_str).collect();
            let plain = FnRing::poly_ring(&coords);
            let dens = c
                .denominators
                .iter()
                .map(|d| parse_denominator(d, &plain))
                .collect::<Result<Vec<_>>>()?;
            let ring = FnRing::localized(&coords, dens)?;
            charts.push(Chart::new(&c.name, ring));
        }
        let chart = |name: &str| -> Result<&Chart> {
            charts
                .iter()
                .find(|c| c.name() == name)
                .ok_or_else(|| Error::parse(0, 0, format!("unknown chart `{name}`")))
        };
        let mut transitions = Vec::new();
        for t in &self.transitions {
            let from = chart(&t.from)?.clone();
            let to = chart(&t.to)?.clone();
            let overlap_ring = |base: &Chart, extra: &[String]| -> Result<Arc<FnRing>> {
                let coords: Vec<&str> =
                    base.ring().var_names().iter().map(String::as_str).collect();
                let mut dens = base.ring().denominators().to_vec();
                let plain = FnRing::poly_ring(&coords);
                for d in extra {
                    dens.push(parse_denominator(d, &plain)?);
                }
                FnRing::localized(&coords, dens)
            };
            let overlap_from = overlap_ring(&from, &t.overlap_denominators_from)?;
            let overlap_to = overlap_ring(&to, &t.overlap_denominators_to)?;
            let maps = t
                .maps
                .iter()
                .map(|m| parse_elem(m, &overlap_from, &Params::new()))
                .collect::<Result<Vec<_>>>()?;
            let inverse_maps = t
                .inverse_maps
                .iter()
                .map(|m| parse_elem(m, &overlap_to, &Params::new()))
                .collect::<Result<Vec<_>>>()?;
            transitions.push(Transition::new(
                from,
                to,
                overlap_from,
                overlap_to,
                maps,
                inverse_maps,
            )?);
        }
        Ok(Atlas {
            name: self.name.clone(),
            charts,
            transitions,
        })
    }
}

/// Parse a polynomial in jet variables (`X` or `X_1..X_n`) into a series.
pub fn parse_jet_poly(
    src: &str,
    nvars: usize,
    order: u32,
    params: &Params,
) -> Result<jetav::TruncSeries> {
    let names = jetav::TruncSeries::default_names(nvars, 'X');
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = FnRing::poly_ring(&refs);
    let elem = parse_elem(src, &ring, params)?;
    let ctx = jetav::SeriesCtx::rational(nvars, order);
    let mut out = jetav::TruncSeries::zero(&ctx);
    for (idx, c) in elem.numerator().terms() {
        out = out.add(&jetav::TruncSeries::monomial(
            &ctx,
            idx.clone(),
            RingElem::constant(&ctx.ring, c.clone()),
        ))?;
    }
    Ok(out)
}

pub fn string_params(raw: &BTreeMap<String, String>) -> Result<Params> {
    raw.iter()
        .map(|(k, v)| Ok((k.clone(), v.parse()?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_keys_round_trip() {
        for (key, nvars) in [
            ("X d/dX", 1),
            ("X^2 d/dX", 1),
            ("X_1 X_2^2 d/dX_1", 2),
            ("X_2^3 d/dX_2", 2),
        ] {
            let (s, dir) = parse_generator_key(key, nvars).unwrap();
            let rendered = render_generator_key(&s, dir, nvars);
            assert_eq!(rendered, key);
            assert_eq!(parse_generator_key(&rendered, nvars).unwrap(), (s, dir));
        }
        assert!(parse_generator_key("d/dX", 1).is_err());
        assert!(parse_generator_key("X", 1).is_err());
        assert!(parse_generator_key("X_3 d/dX_1", 2).is_err());
    }

    #[test]
    fn param_bindings() {
        let params = parse_param_bindings(&["m=3".into(), "k=-1/2".into()]).unwrap();
        assert_eq!(params["m"], Rat::from_int(3));
        assert_eq!(params["k"], Rat::new(-1, 2));
        assert!(parse_param_bindings(&["oops".into()]).is_err());
    }
}
