//! `orbitquant`: command-line front end for the orbit quantization engine.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on a parse or load error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use orbitquant::commpoly::{is_invariant, MonomialOrder};
use orbitquant::expr::{parse_hpoly, parse_uelement, Symbols};
use orbitquant::io::{load_algebra, load_orbit, parse_order, LoadedOrbit};
use orbitquant::liealg::presets as lie_presets;
use orbitquant::orbit::{presets, OrbitAlgebra, OrbitSpec, QuantizationMap};
use orbitquant::{tdo, Enveloping, Error, GaussRat, LieAlgebra, UElement};

#[derive(Parser, Debug)]
#[command(name = "orbitquant", version, about = "Exact deformation quantization of coadjoint orbits")]
struct Cli {
    /// Preset algebra: sl2, su2 or so21.
    #[arg(long, global = true, default_value = "sl2")]
    preset: String,
    /// Algebra file (JSON or TOML); overrides --preset.
    #[arg(long, global = true)]
    algebra: Option<PathBuf>,
    /// Orbit file (JSON or TOML); overrides --algebra and --preset.
    #[arg(long, global = true)]
    orbit: Option<PathBuf>,
    /// Variable precedence for the monomial order, e.g. `H,X,Y`.
    #[arg(long, global = true, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// Quantization map: standard or symmetric.
    #[arg(long, global = true)]
    map: Option<String>,
    /// Orbit constant c(h) for preset orbits, e.g. `c0` or `a^2 - c1*h`.
    #[arg(long, global = true)]
    constant: Option<String>,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jacobi identity, invariance of the invariants, Killing form, regularity.
    Check,
    /// PBW normal form of a noncommutative expression.
    Nf { expr: String },
    /// Symmetrized invariants and their centrality.
    Casimir,
    /// Star product of two polynomial functions on the orbit.
    Star { f: String, g: String },
    /// Reduction of a noncommutative expression modulo the orbit ideal.
    Reduce { expr: String },
    /// Commutator table and relations of a preset's generators.
    Relations { preset: String },
    /// Deformation axioms on all standard monomials up to a degree.
    Verify {
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Casimir identities of sl(2) on homogeneous polynomials.
    Repcheck {
        #[arg(long, default_value_t = tdo::DEFAULT_MAX_M)]
        max_m: usize,
        #[arg(long, default_value = "1")]
        hbar: String,
    },
}

/// Result of a command: text/JSON output and whether all checks passed.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

struct Session {
    cli: Cli,
}

impl Session {
    fn algebra(&self) -> Result<LieAlgebra, Error> {
        if let Some(p) = &self.cli.orbit {
            return Ok(load_orbit(p)?.spec.algebra);
        }
        if let Some(p) = &self.cli.algebra {
            return load_algebra(p);
        }
        lie_presets::by_name(&self.cli.preset)
            .ok_or_else(|| Error::Load(format!("unknown preset `{}`", self.cli.preset)))
    }

    fn map(&self) -> Result<Option<QuantizationMap>, Error> {
        self.cli.map.as_deref().map(str::parse).transpose()
    }

    fn order(&self, lie: &LieAlgebra) -> Result<Option<MonomialOrder>, Error> {
        self.cli.order.as_ref().map(|o| parse_order(o, lie)).transpose()
    }

    fn orbit(&self) -> Result<OrbitAlgebra, Error> {
        self.orbit_for(None)
    }

    fn orbit_for(&self, preset: Option<&str>) -> Result<OrbitAlgebra, Error> {
        let map = self.map()?;
        if preset.is_none() {
            if let Some(p) = &self.cli.orbit {
                let loaded = load_orbit(p)?;
                let order = self.order(&loaded.spec.algebra)?;
                return loaded.build(order, map);
            }
            if let Some(p) = &self.cli.algebra {
                let lie = load_algebra(p)?;
                let text = self.cli.constant.as_deref().unwrap_or("c0");
                let spec = OrbitSpec::new(lie, vec![parse_hpoly(text)?])?;
                let order = self.order(&spec.algebra)?;
                return LoadedOrbit { spec, order, map }.build(None, None);
            }
        }
        let name = preset.unwrap_or(&self.cli.preset);
        let lie = lie_presets::by_name(name).ok_or_else(|| Error::Load(format!("unknown preset `{name}`")))?;
        let text = match &self.cli.constant {
            Some(t) => t.as_str(),
            None => presets::default_constant(name).unwrap_or("c0"),
        };
        let order = match self.order(&lie)? {
            Some(o) => o,
            None => presets::default_order(name).unwrap_or_else(|| MonomialOrder::deglex(lie.dim())),
        };
        let spec = presets::spec(name, &parse_hpoly(text)?)?;
        OrbitAlgebra::build(spec, order, map.unwrap_or_default())
    }

    fn run(&self) -> Result<Output, Error> {
        match &self.cli.command {
            Command::Check => self.check(),
            Command::Nf { expr } => self.nf(expr),
            Command::Casimir => self.casimir(),
            Command::Star { f, g } => self.star(f, g),
            Command::Reduce { expr } => self.reduce(expr),
            Command::Relations { preset } => self.relations(preset),
            Command::Verify { max_degree } => self.verify(*max_degree),
            Command::Repcheck { max_m, hbar } => self.repcheck(*max_m, hbar),
        }
    }

    fn check(&self) -> Result<Output, Error> {
        let lie = self.algebra()?;
        let order = MonomialOrder::deglex(lie.dim());
        let names = lie.coordinate_names();
        let mut lines = Vec::new();
        let jacobi = lie.jacobi_check();
        lines.push(format!(
            "jacobi: {}",
            if jacobi.is_empty() { "ok".to_string() } else { format!("fails on {jacobi:?}") }
        ));
        let killing = lie.killing_form().is_ok();
        lines.push(format!("killing form: {}", if killing { "nondegenerate" } else { "degenerate" }));
        let invariants = lie.effective_invariants()?;
        let mut inv_json = Vec::new();
        let mut inv_ok = true;
        for p in &invariants {
            let ok = is_invariant(p, &lie);
            inv_ok &= ok;
            let text = p.to_text(&names, &order);
            lines.push(format!("invariant {text}: {}", if ok { "ok" } else { "NOT invariant" }));
            inv_json.push(json!({"invariant": text, "ok": ok}));
        }
        let witness = match &self.cli.orbit {
            Some(p) => load_orbit(p)?.spec.witness,
            None if self.cli.algebra.is_none() => lie_presets::witness_point(&self.cli.preset),
            None => None,
        };
        let mut regular_ok = true;
        let mut regular_json = Value::Null;
        if let Some(point) = witness {
            let text = point.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
            let regular = lie.is_regular(&point)?;
            regular_ok = regular;
            lines.push(format!("regular point ({text}): {}", if regular { "ok" } else { "NOT regular" }));
            regular_json = json!({"point": text, "regular": regular});
        }
        let ok = jacobi.is_empty() && killing && inv_ok && regular_ok;
        Ok(Output {
            text: lines.join("\n"),
            json: json!({
                "algebra": lie.name(),
                "jacobi": jacobi.is_empty(),
                "killing_nondegenerate": killing,
                "invariants": inv_json,
                "regularity": regular_json,
                "ok": ok,
            }),
            ok,
        })
    }

    fn nf(&self, expr: &str) -> Result<Output, Error> {
        let env = Enveloping::new(self.algebra()?);
        let u = parse_uelement(expr, &env, &Symbols::Any)?;
        let text = u.to_text(env.lie().labels());
        Ok(Output {
            json: json!({"input": expr, "normal_form": text}),
            text,
            ok: true,
        })
    }

    fn casimir(&self) -> Result<Output, Error> {
        let lie = self.algebra()?;
        let env = Enveloping::new(lie.clone());
        let names = lie.coordinate_names();
        let order = MonomialOrder::deglex(lie.dim());
        let mut lines = Vec::new();
        let mut rows = Vec::new();
        let mut ok = true;
        for p in lie.effective_invariants()? {
            let cas = env.symmetrize(&p)?;
            let central = env.is_central(&cas);
            ok &= central;
            let (pt, ct) = (p.to_text(&names, &order), cas.to_text(lie.labels()));
            lines.push(format!("Sym({pt}) = {ct}"));
            lines.push(format!("central: {}", if central { "yes" } else { "NO" }));
            rows.push(json!({"invariant": pt, "symmetrized": ct, "central": central}));
        }
        Ok(Output {
            text: lines.join("\n"),
            json: json!({"casimirs": rows, "ok": ok}),
            ok,
        })
    }

    fn star(&self, f: &str, g: &str) -> Result<Output, Error> {
        let o = self.orbit()?;
        let (pf, pg) = (o.parse_function(f)?, o.parse_function(g)?);
        let s = o.star(&pf, &pg)?;
        Ok(Output {
            text: o.format(&s),
            json: json!({"f": f, "g": g, "map": o.map().to_string(), "star": s.to_json(&o.names())}),
            ok: true,
        })
    }

    fn reduce(&self, expr: &str) -> Result<Output, Error> {
        let o = self.orbit()?;
        let u = o.parse_element(expr, &[])?;
        let r = o.reduce(&u)?;
        Ok(Output {
            text: o.format(&r),
            json: json!({"input": expr, "reduced": r.to_json(&o.names())}),
            ok: true,
        })
    }

    fn relations(&self, preset: &str) -> Result<Output, Error> {
        let o = self.orbit_for(Some(preset))?;
        let mut lines = Vec::new();
        let (table, checks, ok) = if preset == "so21" {
            let constant = self
                .cli
                .constant
                .clone()
                .unwrap_or_else(|| presets::default_constant("so21").unwrap_or("c0").to_string());
            let sub = presets::so21_subalgebra(&constant);
            let report = o.invariant_subalgebra_demo(&lie_presets::so21_reflection(), &sub)?;
            let gens: Vec<String> = sub.generators.iter().map(|(n, e)| format!("{n} = {e}")).collect();
            lines.push(format!("generators: {}", gens.join(", ")));
            for (g, inv) in &report.invariant_generators {
                lines.push(format!("{g} invariant: {}", if *inv { "yes" } else { "NO" }));
            }
            for (r, holds) in &report.classical_relations {
                lines.push(format!("classical {r}: {}", if *holds { "holds" } else { "FAILS" }));
            }
            let ok = report.passed();
            (report.table, report.quantum_relations, ok)
        } else {
            let gens = generator_bindings(&o);
            (o.relations_table(&gens)?, Vec::new(), true)
        };
        lines.push("commutators:".to_string());
        for row in &table {
            let form = row.generator_form.as_deref().unwrap_or(&row.value);
            lines.push(format!("  {} = {}", row.lhs, form));
        }
        if !checks.is_empty() {
            lines.push("relations:".to_string());
            for c in &checks {
                lines.push(format!("  {} = {}: {}", c.lhs, c.rhs, if c.holds { "holds" } else { "FAILS" }));
                if !c.holds {
                    for t in &c.transcript {
                        lines.push(format!("      {t}"));
                    }
                }
            }
        }
        Ok(Output {
            text: lines.join("\n"),
            json: json!({"preset": preset, "table": table, "relations": checks, "ok": ok}),
            ok,
        })
    }

    fn verify(&self, max_degree: usize) -> Result<Output, Error> {
        let o = self.orbit()?;
        let assoc = max_degree.min(2);
        let report = o.verify_deformation(max_degree, assoc)?;
        let mut lines = vec![format!(
            "checked {} pairs (degree <= {max_degree}) and {} triples (degree <= {assoc})",
            report.pairs_checked, report.triples_checked
        )];
        for v in &report.violations {
            lines.push(format!(
                "violation {:?} at [{}]: found {}, expected {}",
                v.kind,
                v.witnesses.join(", "),
                v.found,
                v.expected
            ));
        }
        lines.push(if report.is_ok() { "ok".into() } else { format!("{} violations", report.violations.len()) });
        Ok(Output {
            text: lines.join("\n"),
            ok: report.is_ok(),
            json: serde_json::to_value(&report).map_err(|e| Error::Load(e.to_string()))?,
        })
    }

    fn repcheck(&self, max_m: usize, hbar: &str) -> Result<Output, Error> {
        let hbar = parse_number(hbar)?;
        let rows = tdo::rep_table(max_m, &hbar)?;
        let mut lines = vec![format!("{:>3} {:>4} {:>10} {:>12} {:>12}  status", "m", "dim", "casimir", "rescaled", "expected")];
        for r in &rows {
            lines.push(format!(
                "{:>3} {:>4} {:>10} {:>12} {:>12}  {}",
                r.m,
                r.dim,
                r.casimir.as_deref().unwrap_or("-"),
                r.rescaled.as_deref().unwrap_or("-"),
                r.expected_rescaled,
                if r.passed { "pass" } else { "FAIL" }
            ));
        }
        let ok = rows.iter().all(|r| r.passed);
        Ok(Output {
            text: lines.join("\n"),
            json: json!({"hbar": hbar.to_string(), "rows": rows, "ok": ok}),
            ok,
        })
    }
}

fn generator_bindings(o: &OrbitAlgebra) -> Vec<(String, UElement)> {
    o.lie()
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), UElement::generator(i)))
        .collect()
}

fn parse_number(text: &str) -> Result<GaussRat, Error> {
    let v = parse_hpoly(text)?;
    v.as_constant().ok_or_else(|| Error::NotNumeric(text.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_out = cli.json;
    let session = Session { cli };
    match session.run() {
        Ok(out) => {
            if json_out {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if json_out {
                println!("{}", json!({"error": e.to_string()}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
