//! Loading algebras and orbits from JSON or TOML files.
//!
//! Algebra file:
//!
//! ```json
//! {
//!   "name": "sl2",
//!   "labels": ["H", "X", "Y"],
//!   "rank": 1,
//!   "brackets": [
//!     {"i": "H", "j": "X", "coeffs": {"X": "2"}},
//!     {"i": "H", "j": "Y", "coeffs": {"Y": "-2"}},
//!     {"i": "X", "j": "Y", "coeffs": {"H": "1"}}
//!   ],
//!   "invariants": ["1/4*x_H^2 + x_X*x_Y"],
//!   "killing_scale": "1",
//!   "casimir_scale": "2"
//! }
//! ```
//!
//! Generators may be referred to by label or by zero-based index. Orbit file:
//!
//! ```json
//! {
//!   "algebra": "sl2.json",
//!   "constants": [{"i": 0, "c": ["c0", "c1"]}],
//!   "order": {"precedence": ["H", "X", "Y"]},
//!   "map": "standard"
//! }
//! ```
//!
//! `algebra` is a path (relative to the orbit file) or a preset name; `c`
//! lists the coefficients of `c_i(h)` from `h^0` upwards.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::commpoly::MonomialOrder;
use crate::error::{Error, Result};
use crate::expr::{parse_commpoly, parse_hpoly, parse_scalar, Symbols};
use crate::liealg::{presets, Bracket, LieAlgebra};
use crate::orbit::{OrbitAlgebra, OrbitSpec, QuantizationMap};
use crate::scalar::{GaussRat, HPoly, Scalar};

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GeneratorRef {
    Index(usize),
    Label(String),
}

impl GeneratorRef {
    fn resolve(&self, labels: &[String]) -> Result<usize> {
        match self {
            GeneratorRef::Index(i) if *i < labels.len() => Ok(*i),
            GeneratorRef::Index(i) => Err(Error::Load(format!("generator index {i} out of range"))),
            GeneratorRef::Label(s) => resolve_label(s, labels),
        }
    }
}

fn resolve_label(s: &str, labels: &[String]) -> Result<usize> {
    if let Some(i) = labels.iter().position(|l| l == s) {
        return Ok(i);
    }
    match s.parse::<usize>() {
        Ok(i) if i < labels.len() => Ok(i),
        _ => Err(Error::UnknownIdentifier(s.to_string())),
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: GeneratorRef,
    pub j: GeneratorRef,
    /// Target generator (label or index) to coefficient text.
    pub coeffs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub labels: Vec<String>,
    pub rank: usize,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub invariants: Vec<String>,
    pub killing_scale: Option<String>,
    pub casimir_scale: Option<String>,
}

fn number(text: &str) -> Result<GaussRat> {
    parse_scalar(text, &[])?
        .as_constant()
        .ok_or_else(|| Error::NotNumeric(text.to_string()))
}

impl AlgebraFile {
    pub fn into_algebra(self) -> Result<LieAlgebra> {
        let labels = self.labels.clone();
        let mut brackets: Vec<(usize, usize, Bracket)> = Vec::new();
        for entry in &self.brackets {
            let i = entry.i.resolve(&labels)?;
            let j = entry.j.resolve(&labels)?;
            let mut coeffs = Bracket::new();
            for (k, c) in &entry.coeffs {
                coeffs.push((resolve_label(k, &labels)?, number(c)?));
            }
            coeffs.sort_by_key(|(k, _)| *k);
            brackets.push((i, j, coeffs));
        }
        let mut lie = LieAlgebra::new(self.name.clone(), labels, &brackets)?.with_rank(self.rank)?;
        if let Some(s) = &self.killing_scale {
            lie = lie.with_killing_scale(number(s)?);
        }
        if let Some(s) = &self.casimir_scale {
            lie = lie.with_casimir_scale(number(s)?);
        }
        if !self.invariants.is_empty() {
            let invs = self
                .invariants
                .iter()
                .map(|t| parse_commpoly(t, &lie, &Symbols::None))
                .collect::<Result<Vec<_>>>()?;
            lie = lie.with_invariants(invs)?;
        }
        Ok(lie)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantEntry {
    pub i: usize,
    pub c: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderEntry {
    pub precedence: Vec<GeneratorRef>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitFile {
    pub algebra: String,
    pub constants: Vec<ConstantEntry>,
    pub order: Option<OrderEntry>,
    pub map: Option<String>,
    /// Optional constants of the classical ideal, checked against `c_i(0)`.
    pub classical: Option<Vec<String>>,
    /// Optional regular point of the orbit.
    pub witness: Option<Vec<String>>,
}

/// An orbit file resolved to its parts, before building the algebra.
#[derive(Clone, Debug)]
pub struct LoadedOrbit {
    pub spec: OrbitSpec,
    pub order: Option<MonomialOrder>,
    pub map: Option<QuantizationMap>,
}

impl LoadedOrbit {
    /// Builds with the file's order and map, falling back to `order` / `map`.
    pub fn build(self, order: Option<MonomialOrder>, map: Option<QuantizationMap>) -> Result<OrbitAlgebra> {
        let n = self.spec.algebra.dim();
        let order = order.or(self.order).unwrap_or_else(|| MonomialOrder::deglex(n));
        let map = map.or(self.map).unwrap_or_default();
        OrbitAlgebra::build(self.spec, order, map)
    }
}

fn parse_document<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T> {
    let is_toml = path.extension().is_some_and(|e| e == "toml");
    if is_toml {
        toml::from_str(text).map_err(|e| Error::Load(format!("{}: {e}", path.display())))
    } else {
        serde_json::from_str(text).map_err(|e| Error::Load(format!("{}: {e}", path.display())))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Load(format!("{}: {e}", path.display())))
}

pub fn load_algebra(path: &Path) -> Result<LieAlgebra> {
    let file: AlgebraFile = parse_document(&read(path)?, path)?;
    file.into_algebra()
}

/// Resolves a precedence list such as `H,X,Y` against the algebra's labels.
pub fn parse_order(list: &[String], lie: &LieAlgebra) -> Result<MonomialOrder> {
    let prec = list
        .iter()
        .map(|s| resolve_label(s.trim(), lie.labels()))
        .collect::<Result<Vec<_>>>()?;
    if prec.len() != lie.dim() {
        return Err(Error::DimensionMismatch {
            expected: lie.dim(),
            found: prec.len(),
        });
    }
    MonomialOrder::with_precedence(prec)
}

pub fn load_orbit(path: &Path) -> Result<LoadedOrbit> {
    let file: OrbitFile = parse_document(&read(path)?, path)?;
    let algebra = match presets::by_name(&file.algebra) {
        Some(l) => l,
        None => {
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            load_algebra(&base.join(&file.algebra))?
        }
    };
    orbit_from_file(file, algebra)
}

pub fn orbit_from_file(file: OrbitFile, algebra: LieAlgebra) -> Result<LoadedOrbit> {
    let invariants = algebra.effective_invariants()?;
    let mut constants = vec![None; invariants.len()];
    for entry in &file.constants {
        let slot = constants.get_mut(entry.i).ok_or(Error::DimensionMismatch {
            expected: invariants.len(),
            found: entry.i + 1,
        })?;
        let coeffs = entry
            .c
            .iter()
            .map(|t| {
                parse_hpoly(t)?
                    .as_scalar()
                    .ok_or_else(|| Error::NotNumeric(t.clone()))
            })
            .collect::<Result<Vec<Scalar>>>()?;
        *slot = Some(HPoly::from_coeffs(coeffs));
    }
    let constants = constants
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::Load(format!("missing constant for invariant {i}"))))
        .collect::<Result<Vec<_>>>()?;
    let order = match &file.order {
        Some(o) => {
            let names: Vec<String> = o
                .precedence
                .iter()
                .map(|g| g.resolve(algebra.labels()).map(|i| i.to_string()))
                .collect::<Result<_>>()?;
            Some(parse_order(&names, &algebra)?)
        }
        None => None,
    };
    let map = file.map.as_deref().map(str::parse).transpose()?;
    let mut spec = OrbitSpec::new(algebra, constants)?;
    if let Some(c) = &file.classical {
        let syms: Vec<String> = spec.symbols();
        let refs: Vec<&str> = syms.iter().map(String::as_str).collect();
        let values = c
            .iter()
            .map(|t| parse_scalar(t, &refs))
            .collect::<Result<Vec<_>>>()?;
        spec = spec.with_classical_constants(values);
    }
    if let Some(w) = &file.witness {
        spec = spec.with_witness(w.iter().map(|t| number(t)).collect::<Result<_>>()?);
    }
    Ok(LoadedOrbit { spec, order, map })
}
