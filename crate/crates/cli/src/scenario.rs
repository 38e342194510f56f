//! Versioned scenario files and the step-by-step reproduction pipeline.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use exotic_core::embedding::{
    blowdown_invariants, null_vector, verify_configuration, BlowdownScenario, Genus, Invariants, SphereConfiguration,
};
use exotic_core::fibration::{
    base_points, fiber_euler, identity, parse_word, pencil_singular_members, word_product, FiberDescriptor,
    RationalPoly,
};
use exotic_core::lattice::{gram, integer_coordinates, orthogonal_complement, pair, AmbientLattice};
use exotic_core::plumbing::{
    boundary_homology, cf_expand, embedding_certificate, extends_over_ball, k_restriction, meridian_class,
};
use exotic_core::swsearch::{
    blow_up_basics, enumerate_candidates, AdjunctionConstraint, BasicClassSet, Enumeration, SquareFilter, WallOutcome,
};
use exotic_core::{BigInt, Chain, Class, Error, Graph, Result};
use num_bigint::Sign;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::{Report, Status, Step, CONCLUSION};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    #[serde(default)]
    pub p: Option<i64>,
    #[serde(default)]
    pub q: Option<i64>,
    #[serde(default)]
    pub weights: Option<Vec<i64>>,
}

/// A class written either as a string (`"h-e1-e2"`) or as a coefficient array.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ClassSpec {
    Text(String),
    Coeffs(Vec<Value>),
}

impl ClassSpec {
    pub fn resolve(&self, n: usize) -> Result<Class> {
        match self {
            ClassSpec::Text(s) => Class::parse(n, s),
            ClassSpec::Coeffs(v) => {
                let coeffs = v
                    .iter()
                    .map(|x| {
                        exotic_core::json::value_to_int(x)
                            .ok_or_else(|| Error::Scenario(format!("bad coefficient {x}")))
                    })
                    .collect::<Result<Vec<BigInt>>>()?;
                if coeffs.len() != n + 1 {
                    return Err(Error::Scenario(format!(
                        "class has {} coefficients, ambient needs {}",
                        coeffs.len(),
                        n + 1
                    )));
                }
                Ok(Class::new(coeffs))
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub generator_vertex: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeridianSpec {
    pub generator_vertex: usize,
    pub multiple: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallSpec {
    /// Defaults to `3h − e₁ − … − eₙ`.
    #[serde(default)]
    pub k: Option<ClassSpec>,
    pub reference: ClassSpec,
    pub period: ClassSpec,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSpec {
    #[serde(default)]
    pub max_mult: Option<u32>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromySpec {
    pub word: Value,
    #[serde(default)]
    pub fibers: Vec<FiberDescriptor>,
    /// Number of blow-ups of the plane giving the total space.
    #[serde(default)]
    pub blowups: Option<i64>,
    #[serde(default)]
    pub fiber_graph: Option<Graph>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilSpec {
    pub p1: String,
    pub p2: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorollarySpec {
    pub n: usize,
    pub basic_class: ClassSpec,
    pub blowups: Vec<usize>,
}

/// Expected failure of a class list: every itemized failure involves `fails_at`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedFailure {
    pub fails_at: usize,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub chi: Option<i64>,
    pub sigma: Option<i64>,
    pub b2_plus: Option<i64>,
    pub b2_minus: Option<i64>,
    pub configuration_failure: Option<ExpectedFailure>,
    pub complement_rank: Option<usize>,
    pub discriminant: Option<i64>,
    pub stages: Option<[usize; 3]>,
    pub survivors: Option<Vec<Vec<i64>>>,
    pub survivor_square: Option<i64>,
    pub survivor_dimension: Option<i64>,
    /// Accepted up to sign.
    pub k_residue: Option<i64>,
    pub extends: Option<bool>,
    pub wall: Option<WallOutcome>,
    pub k_reference: Option<i64>,
    pub k_period: Option<i64>,
    pub period_reference: Option<i64>,
    pub period_square: Option<i64>,
    pub blowdowns: Option<usize>,
    pub euler_total: Option<i64>,
    pub null_vector: Option<Vec<i64>>,
    pub determinant: Option<String>,
    pub singular_members: Option<usize>,
    pub base_point_multiplicities: Option<Vec<usize>>,
    pub basic_class_counts: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub ambient_n: Option<usize>,
    #[serde(default)]
    pub chain: Option<ChainSpec>,
    #[serde(default)]
    pub classes: Option<Vec<ClassSpec>>,
    #[serde(default)]
    pub genus_tags: Option<Vec<Genus>>,
    /// Constraint file, relative to the scenario file.
    #[serde(default)]
    pub constraints: Option<String>,
    #[serde(default)]
    pub extension: Option<ExtensionSpec>,
    #[serde(default)]
    pub meridian: Option<MeridianSpec>,
    #[serde(default)]
    pub wall: Option<WallSpec>,
    #[serde(default)]
    pub certificate: Option<CertificateSpec>,
    #[serde(default)]
    pub monodromy: Option<MonodromySpec>,
    #[serde(default)]
    pub pencil: Option<PencilSpec>,
    #[serde(default)]
    pub corollary: Option<CorollarySpec>,
    #[serde(default)]
    pub expected: Expected,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintEntry {
    pub index: usize,
    pub genus: Genus,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivedEntry {
    /// Basis indices, repeated for coefficients above 1.
    pub combo: Vec<usize>,
    pub genus: Genus,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintFile {
    pub schema: u32,
    pub basis: Vec<ClassSpec>,
    pub constraints: Vec<ConstraintEntry>,
    #[serde(default)]
    pub derived: Vec<DerivedEntry>,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub workers: usize,
    pub max_mult: Option<u32>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { workers: 1, max_mult: None }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))
}

/// A parsed scenario and the directory its relative references resolve against.
#[derive(Clone, Debug)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub base: PathBuf,
}

pub fn load_scenario(path: &Path) -> Result<LoadedScenario> {
    let scenario: Scenario = read_json(path)?;
    if scenario.schema != SCHEMA {
        return Err(Error::Scenario(format!("unsupported schema {} (expected {SCHEMA})", scenario.schema)));
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(LoadedScenario { scenario, base })
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn to_i64(v: &BigInt) -> Value {
    exotic_core::json::int_to_value(v)
}

fn check<T: PartialEq + std::fmt::Debug>(failures: &mut Vec<String>, what: &str, expected: Option<T>, found: T) {
    if let Some(e) = expected {
        if e != found {
            failures.push(format!("{what}: expected {e:?}, found {found:?}"));
        }
    }
}

fn step(name: &str, failures: Vec<String>, detail: String, values: Value) -> Step {
    if failures.is_empty() {
        Step { step: name.into(), status: Status::Pass, detail, values }
    } else {
        Step { step: name.into(), status: Status::Fail, detail: format!("{detail}; {}", failures.join("; ")), values }
    }
}

fn skip(name: &str, why: &str) -> Step {
    Step { step: name.into(), status: Status::Skip, detail: why.into(), values: Value::Null }
}

/// Resolved inputs shared by the steps.
pub struct Runner {
    pub scenario: Scenario,
    pub base: PathBuf,
    pub options: RunOptions,
    chain: Option<Chain>,
    classes: Option<Vec<Class>>,
    configuration_verified: bool,
    invariants: Option<Invariants>,
}

impl Runner {
    /// Parses every inline input up front so malformed files fail before any step runs.
    pub fn new(loaded: LoadedScenario, options: RunOptions) -> Result<Self> {
        let LoadedScenario { scenario, base } = loaded;
        let chain = match &scenario.chain {
            Some(ChainSpec { weights: Some(w), p, q }) => {
                let mut c = Chain::from_i64s(w)?;
                if let (Some(p), Some(q)) = (p, q) {
                    // Provenance is attached only when consistent; the cf step reports mismatches.
                    if let Ok(with) = c.clone().with_provenance(int(*p), int(*q)) {
                        c = with;
                    }
                }
                Some(c)
            }
            Some(ChainSpec { weights: None, p: Some(p), q: Some(q) }) => Some(cf_expand(int(*p), int(*q))?),
            Some(_) => return Err(Error::Scenario("chain needs weights or both p and q".into())),
            None => None,
        };
        let classes = match &scenario.classes {
            Some(list) => {
                let n = scenario.ambient_n.ok_or_else(|| Error::Scenario("classes need ambient_n".into()))?;
                Some(list.iter().map(|c| c.resolve(n)).collect::<Result<Vec<_>>>()?)
            }
            None => None,
        };
        if let (Some(tags), Some(cl)) = (&scenario.genus_tags, &classes) {
            if tags.len() != cl.len() {
                return Err(Error::Scenario(format!("{} genus tags for {} classes", tags.len(), cl.len())));
            }
        }
        Ok(Runner { scenario, base, options, chain, classes, configuration_verified: false, invariants: None })
    }

    fn chain(&self) -> Option<&Chain> {
        self.chain.as_ref()
    }

    fn configuration(&self) -> Option<SphereConfiguration<BigInt>> {
        let (classes, chain, n) = (self.classes.as_ref()?, self.chain()?, self.scenario.ambient_n?);
        let mut c = SphereConfiguration::new(AmbientLattice::new(n), classes.clone(), chain.clone());
        if let Some(tags) = &self.scenario.genus_tags {
            c.genus_tags = tags.clone();
        }
        Some(c)
    }

    pub fn cf_check(&mut self) -> Result<Step> {
        let Some(spec) = self.scenario.chain.clone() else { return Ok(skip("cf_check", "no chain")) };
        let (Some(p), Some(q)) = (spec.p, spec.q) else {
            return Ok(skip("cf_check", "chain has no (p, q)"));
        };
        let expansion = cf_expand(int(p), int(q))?;
        let given = self.chain().expect("chain resolved").clone();
        let mut failures = Vec::new();
        let orientation = if given == expansion {
            "same"
        } else if given == expansion.reversed() {
            "reversed"
        } else {
            failures.push(format!("weights {given} differ from the expansion {expansion} in both orientations"));
            "mismatch"
        };
        let values = json!({
            "p": p,
            "q": q,
            "expansion": serde_json::to_value(&expansion)?,
            "given": serde_json::to_value(&given)?,
            "orientation": orientation,
        });
        Ok(step("cf_check", failures, format!("C({p},{q}) expands to {expansion}, given {orientation}"), values))
    }

    pub fn configuration_step(&mut self) -> Result<Step> {
        let Some(config) = self.configuration() else {
            return Ok(skip("configuration", "not applicable: no class list"));
        };
        let report = verify_configuration(&config);
        let mut failures = Vec::new();
        let detail;
        match &self.scenario.expected.configuration_failure {
            None => {
                self.configuration_verified = report.pass;
                if !report.pass {
                    failures.extend(report.failures.iter().map(ToString::to_string));
                }
                detail = format!("{} classes against chain {}", config.classes.len(), config.chain);
            }
            Some(ExpectedFailure { fails_at }) => {
                let at = report.failures_at(*fails_at).len();
                if report.pass {
                    failures.push(format!("expected a failure at position {fails_at}, but the list verifies"));
                } else if at != report.failures.len() {
                    failures.push(format!("failures outside position {fails_at}"));
                }
                let items: Vec<String> = report.failures.iter().map(ToString::to_string).collect();
                detail = format!("expected failure at position {fails_at}: {}", items.join("; "));
            }
        }
        let gram_ok = report.pass;
        let values = json!({ "verified": gram_ok, "failures": serde_json::to_value(&report.failures)? });
        Ok(step("configuration", failures, detail, values))
    }

    pub fn invariants_step(&mut self) -> Result<Step> {
        let Some(n) = self.scenario.ambient_n else { return Ok(skip("invariants", "no ambient")) };
        let configuration = if self.classes.is_some() {
            if !self.configuration_verified {
                return Ok(skip("invariants", "configuration did not verify"));
            }
            self.configuration()
        } else {
            None
        };
        let s = BlowdownScenario {
            name: self.scenario.name.clone(),
            ambient_n: n,
            chain: self.chain.clone(),
            configuration,
        };
        let inv = blowdown_invariants(&s)?;
        let e = &self.scenario.expected;
        let mut failures = Vec::new();
        check(&mut failures, "chi", e.chi, inv.chi);
        check(&mut failures, "sigma", e.sigma, inv.sigma);
        check(&mut failures, "b2_plus", e.b2_plus, inv.b2_plus);
        check(&mut failures, "b2_minus", e.b2_minus, inv.b2_minus);
        let detail = format!("chi = {}, sigma = {}, b2 = ({}, {})", inv.chi, inv.sigma, inv.b2_plus, inv.b2_minus);
        let values = serde_json::to_value(&inv)?;
        self.invariants = Some(inv);
        Ok(step("invariants", failures, detail, values))
    }

    fn constraint_file(&self) -> Result<Option<ConstraintFile>> {
        let Some(rel) = &self.scenario.constraints else { return Ok(None) };
        let file: ConstraintFile = read_json(&self.base.join(rel))?;
        if file.schema != SCHEMA {
            return Err(Error::Scenario(format!("constraint file schema {} unsupported", file.schema)));
        }
        Ok(Some(file))
    }

    fn basis(&self, file: &ConstraintFile) -> Result<Vec<Class>> {
        let n = self.scenario.ambient_n.ok_or_else(|| Error::Scenario("constraints need ambient_n".into()))?;
        file.basis.iter().map(|c| c.resolve(n)).collect()
    }

    pub fn complement_step(&mut self) -> Result<Step> {
        let (Some(classes), Some(n)) = (self.classes.clone(), self.scenario.ambient_n) else {
            return Ok(skip("complement", "not applicable: no class list"));
        };
        if !self.configuration_verified {
            return Ok(skip("complement", "configuration did not verify"));
        }
        let complement = orthogonal_complement(AmbientLattice::new(n), &classes)?;
        let e = &self.scenario.expected;
        let mut failures = Vec::new();
        check(&mut failures, "rank", e.complement_rank, complement.len());
        let mut values = json!({
            "rank": complement.len(),
            "hermite_basis": complement.iter().map(ToString::to_string).collect::<Vec<_>>(),
        });
        let mut detail = format!("rank {}", complement.len());
        if let Some(file) = self.constraint_file()? {
            let basis = self.basis(&file)?;
            let orthogonal =
                basis.iter().all(|a| classes.iter().all(|c| pair(a, c).map(|x| x == int(0)).unwrap_or(false)));
            if !orthogonal {
                failures.push("a listed basis class pairs nontrivially with the configuration".into());
            }
            let spans = complement.iter().all(|c| integer_coordinates(&basis, c).is_some());
            if !spans {
                failures.push("listed classes do not span the complement".into());
            }
            let g = gram(&basis)?;
            let det = g.det();
            let abs = if det.sign() == Sign::Minus { -det.clone() } else { det.clone() };
            let chain_disc = self.chain().map(exotic_core::plumbing::discriminant);
            check(&mut failures, "discriminant", e.discriminant.map(int), abs.clone());
            if let Some(d) = &chain_disc {
                let d = if d.sign() == Sign::Minus { -d.clone() } else { d.clone() };
                if d != abs {
                    failures.push(format!("|det| {abs} differs from the chain's discriminant {d}"));
                }
            }
            values["listed_basis"] = json!({
                "orthogonal": orthogonal,
                "spans": spans,
                "det": to_i64(&det),
                "squares": basis.iter().map(|a| to_i64(&a.square())).collect::<Vec<_>>(),
            });
            detail = format!("{detail}; listed basis orthogonal = {orthogonal}, spans = {spans}, |det| = {abs}");
        }
        Ok(step("complement", failures, detail, values))
    }

    /// Runs the three-stage enumeration; also used by the `enumerate-basic` subcommand.
    pub fn enumeration(&self) -> Result<Option<Enumeration<BigInt>>> {
        let Some(file) = self.constraint_file()? else { return Ok(None) };
        let basis = self.basis(&file)?;
        let g = gram(&basis)?;
        let mut constraints: Vec<Option<AdjunctionConstraint<BigInt>>> = vec![None; basis.len()];
        for c in &file.constraints {
            let slot = constraints.get_mut(c.index).ok_or(Error::ConstraintIndex(c.index))?;
            *slot = Some(AdjunctionConstraint::basis(c.index, c.genus, &g)?);
        }
        let constraints: Vec<_> = constraints
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or(Error::ConstraintIndex(i)))
            .collect::<Result<_>>()?;
        let derived = file
            .derived
            .iter()
            .map(|d| {
                let mut combo = vec![int(0); basis.len()];
                for &i in &d.combo {
                    let slot = combo.get_mut(i).ok_or(Error::ConstraintIndex(i))?;
                    *slot += 1;
                }
                AdjunctionConstraint::derived(combo, d.genus, &g)
            })
            .collect::<Result<Vec<_>>>()?;
        let (chi, sigma) = match &self.invariants {
            Some(inv) => (inv.chi, inv.sigma),
            None => {
                let n = self.scenario.ambient_n.ok_or_else(|| Error::Scenario("no ambient".into()))?;
                let len = self.chain().map_or(0, Chain::len) as i64;
                ((n as i64 + 3) - len, (1 - n as i64) + len)
            }
        };
        let (chi, sigma) = (int(chi), int(sigma));
        let filter = SquareFilter::from_invariants(&chi, &sigma);
        Ok(Some(enumerate_candidates(&constraints, &derived, &g, &chi, &sigma, &filter, self.options.workers)?))
    }

    pub fn enumeration_step(&mut self) -> Result<Step> {
        if self.scenario.constraints.is_none() {
            return Ok(skip("enumeration", "not applicable: no constraint file"));
        }
        let r = self.enumeration()?.expect("constraint file present");
        let e = &self.scenario.expected;
        let mut failures = Vec::new();
        check(&mut failures, "stages", e.stages, r.stages);
        let found: BTreeSet<Vec<BigInt>> = r.survivors.iter().map(|c| c.evals.clone()).collect();
        if let Some(s) = &e.survivors {
            let want: BTreeSet<Vec<BigInt>> = s.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect();
            if want != found {
                failures.push(format!("survivors differ: expected {s:?}"));
            }
        }
        for c in &r.survivors {
            if let Some(sq) = e.survivor_square {
                if c.square != exotic_core::Rational::from_integer(int(sq)) {
                    failures.push(format!("survivor square {} != {sq}", c.square));
                }
            }
            if let Some(d) = e.survivor_dimension {
                if c.dimension != Some(int(d)) {
                    failures.push(format!("survivor dimension {:?} != {d}", c.dimension));
                }
            }
        }
        let symmetric = found.iter().all(|v| found.contains(&v.iter().map(|x| -x).collect::<Vec<_>>()));
        if !symmetric {
            failures.push("survivors not closed under negation".into());
        }
        let surv: Vec<String> = r
            .survivors
            .iter()
            .map(|c| format!("({})", c.evals.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        let detail = format!("stages {:?}, survivors {}", r.stages, surv.join(" "));
        Ok(step("enumeration", failures, detail, r.to_json()))
    }

    pub fn extension_step(&mut self) -> Result<Step> {
        let (Some(spec), Some(chain)) = (&self.scenario.extension, self.chain()) else {
            return Ok(skip("extension", "not applicable"));
        };
        let k = k_restriction(chain, spec.generator_vertex)?;
        let extends = extends_over_ball(chain, &k)?;
        let e = &self.scenario.expected;
        let mut failures = Vec::new();
        if let Some(c) = e.k_residue {
            if !k.is_plus_minus(&int(c)) {
                failures.push(format!("K restricts to {} mod {}, expected +-{c}", k.residue, k.modulus));
            }
        }
        check(&mut failures, "extends", e.extends, extends);
        let p = exotic_core::scalar::exact_sqrt(&k.modulus).unwrap_or_default();
        let detail = format!(
            "K restricts to {} mod {} on the meridian of vertex {}; divisible by {p}: {extends}",
            k.residue, k.modulus, spec.generator_vertex
        );
        let values = json!({
            "residue": to_i64(&k.residue),
            "modulus": to_i64(&k.modulus),
            "generator_vertex": spec.generator_vertex,
            "extends": extends,
        });
        Ok(step("extension", failures, detail, values))
    }

    pub fn meridian_step(&mut self) -> Result<Step> {
        let (Some(spec), Some(chain)) = (&self.scenario.meridian, self.chain()) else {
            return Ok(skip("meridian", "not applicable"));
        };
        let bh = boundary_homology(chain)?;
        let c = int(spec.multiple);
        let mut hits = Vec::new();
        for v in 0..chain.len() {
            let m = meridian_class(chain, v, spec.generator_vertex)?;
            if m.is_plus_minus(&c) {
                hits.push((v, m.residue));
            }
        }
        let coprime = num_integer::Integer::gcd(&c, &bh.modulus) == int(1);
        let mut failures = Vec::new();
        if hits.is_empty() {
            failures.push(format!("no meridian is +-{c} times the generator"));
        }
        if !coprime {
            failures.push(format!("{c} is not coprime to {}", bh.modulus));
        }
        let detail = match hits.first() {
            Some((v, r)) => format!("vertex {v} has residue {r} = +-{c} mod {}, coprime: {coprime}", bh.modulus),
            None => format!("no vertex realizes +-{c} mod {}", bh.modulus),
        };
        let values = json!({
            "modulus": to_i64(&bh.modulus),
            "hits": hits.iter().map(|(v, r)| json!({"vertex": v, "residue": to_i64(r)})).collect::<Vec<_>>(),
            "coprime": coprime,
        });
        Ok(step("meridian", failures, detail, values))
    }

    pub fn wall_step(&mut self) -> Result<Step> {
        let (Some(spec), Some(n)) = (&self.scenario.wall, self.scenario.ambient_n) else {
            return Ok(skip("wall", "not applicable"));
        };
        let k = match &spec.k {
            Some(c) => c.resolve(n)?,
            None => AmbientLattice::new(n).anticanonical(),
        };
        let reference = spec.reference.resolve(n)?;
        let period = spec.period.resolve(n)?;
        let mut failures = Vec::new();
        if let Some(classes) = &self.classes {
            for (i, c) in classes.iter().enumerate() {
                if pair(&period, c)? != int(0) {
                    failures.push(format!("period pairs nontrivially with class {}", i + 1));
                }
            }
        }
        let r = exotic_core::swsearch::wall_test(&k, &reference, &period)?;
        let e = &self.scenario.expected;
        check(&mut failures, "outcome", e.wall, r.outcome);
        check(&mut failures, "K(reference)", e.k_reference.map(int), r.k_reference.clone());
        check(&mut failures, "K(period)", e.k_period.map(int), r.k_period.clone());
        check(&mut failures, "period.reference", e.period_reference.map(int), r.period_reference.clone());
        check(&mut failures, "period.period", e.period_square.map(int), r.period_square.clone());
        let outcome = match r.outcome {
            WallOutcome::Wall => "wall: nonzero (odd number of walls = 1)",
            WallOutcome::Same => "same chamber",
            WallOutcome::OnWall => "on the wall",
        };
        let detail = format!(
            "K(h) = {}, K(alpha) = {}, alpha.h = {}, alpha.alpha = {}; {outcome}",
            r.k_reference, r.k_period, r.period_reference, r.period_square
        );
        Ok(step("wall", failures, detail, serde_json::to_value(&r)?))
    }

    pub fn certificate_step(&mut self) -> Result<Step> {
        let (Some(spec), Some(chain)) = (&self.scenario.certificate, self.chain()) else {
            return Ok(skip("certificate", "not applicable"));
        };
        let max = self.options.max_mult.or(spec.max_mult).unwrap_or(exotic_core::plumbing::DEFAULT_MAX_MULT);
        let mut failures = Vec::new();
        let Some(cert) = embedding_certificate(chain, max)? else {
            failures.push(format!("no certificate with multiplicities <= {max}"));
            return Ok(step("certificate", failures, format!("searched [0, {max}]^{}", chain.len()), Value::Null));
        };
        let r = &cert.reduction;
        let collapsed = r.reduced.vertex_count() == 1 && r.reduced.framings()[0] == int(0);
        if !collapsed {
            failures.push("reduction did not end at a single 0-framed vertex".into());
        }
        check(&mut failures, "blowdowns", self.scenario.expected.blowdowns, r.count);
        let mults: Vec<String> = cert.multiplicities.iter().map(ToString::to_string).collect();
        let detail = format!(
            "(-1)-unknot with multiplicities ({}) blows down {} times to a 0-framed unknot",
            mults.join(","),
            r.count
        );
        Ok(step("certificate", failures, detail, serde_json::to_value(&cert)?))
    }

    pub fn monodromy_step(&mut self) -> Result<Step> {
        let Some(spec) = &self.scenario.monodromy else { return Ok(skip("monodromy", "not applicable")) };
        let word = parse_word::<BigInt>(&spec.word)?;
        let product = word_product(&word)?;
        let mut failures = Vec::new();
        if product != identity() {
            failures.push(format!("product is {product:?}, not the identity"));
        }
        let eulers = spec.fibers.iter().map(fiber_euler).collect::<Result<Vec<_>>>()?;
        let total: i64 = eulers.iter().sum();
        check(&mut failures, "euler_total", self.scenario.expected.euler_total, total);
        if let Some(b) = spec.blowups {
            if total != 3 + b {
                failures.push(format!("fiber Euler numbers sum to {total}, but the total space has {}", 3 + b));
            }
        }
        let marks = match &spec.fiber_graph {
            Some(g) => null_vector(g)?,
            None => None,
        };
        if let Some(want) = &self.scenario.expected.null_vector {
            match &marks {
                Some(m) => {
                    let mut a: Vec<BigInt> = m.clone();
                    let mut b: Vec<BigInt> = want.iter().map(|&x| int(x)).collect();
                    a.sort();
                    b.sort();
                    if a != b {
                        failures.push(format!("null vector {m:?} is not {want:?} up to ordering"));
                    }
                }
                None => failures.push("fiber graph has no positive null vector".into()),
            }
        }
        let sums: Vec<String> = eulers.iter().map(ToString::to_string).collect();
        let detail = format!(
            "word of {} factors multiplies to {}; fiber Euler numbers {} = {total}",
            word.len(),
            if product == identity() { "the identity" } else { "a nontrivial matrix" },
            sums.join(" + ")
        );
        let values = json!({
            "product": product.iter().map(|r| r.iter().map(to_i64).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "fiber_euler": eulers,
            "total": total,
            "null_vector": marks.map(|m| m.iter().map(to_i64).collect::<Vec<_>>()),
        });
        Ok(step("monodromy", failures, detail, values))
    }

    pub fn pencil_step(&mut self) -> Result<Step> {
        let Some(spec) = &self.scenario.pencil else { return Ok(skip("pencil", "not applicable")) };
        let p1 = RationalPoly::<BigInt>::parse(&spec.p1)?;
        let p2 = RationalPoly::<BigInt>::parse(&spec.p2)?;
        let members = pencil_singular_members(&p1, &p2)?;
        let points = base_points(&p1, &p2)?;
        let e = &self.scenario.expected;
        let mut failures = Vec::new();
        check(&mut failures, "determinant", e.determinant.clone(), members.determinant.to_string());
        check(&mut failures, "singular members", e.singular_members, members.total);
        check(&mut failures, "base point multiplicities", e.base_point_multiplicities.clone(), points.multiplicities());
        let names: Vec<String> = members.members.iter().map(|m| m.describe()).collect();
        let detail = format!(
            "determinant {}, {} singular members ({}); base point multiplicities {:?}",
            members.determinant,
            members.total,
            names.join("; "),
            points.multiplicities()
        );
        let values = json!({ "members": members.to_json(), "base_points": points.to_json() });
        Ok(step("pencil", failures, detail, values))
    }

    pub fn corollary_step(&mut self) -> Result<Step> {
        let Some(spec) = &self.scenario.corollary else { return Ok(skip("corollary", "not applicable")) };
        let k = spec.basic_class.resolve(spec.n)?;
        let set = BasicClassSet::symmetric([k]);
        let counts: Vec<usize> = spec.blowups.iter().map(|&t| blow_up_basics(&set, t).len()).collect();
        let mut failures = Vec::new();
        check(&mut failures, "basic class counts", self.scenario.expected.basic_class_counts.clone(), counts.clone());
        let pairs: Vec<String> =
            spec.blowups.iter().zip(&counts).map(|(t, c)| format!("n = {}: {c}", spec.n + t)).collect();
        let values = json!({ "blowups": spec.blowups, "counts": counts });
        Ok(step("corollary", failures, format!("basic classes {}", pairs.join(", ")), values))
    }

    /// All steps in pipeline order. A failed cf check skips everything after it.
    pub fn run(mut self) -> Result<Report> {
        let mut steps = vec![self.cf_check()?];
        if steps[0].status == Status::Fail {
            for name in [
                "configuration",
                "invariants",
                "complement",
                "enumeration",
                "extension",
                "meridian",
                "wall",
                "certificate",
                "monodromy",
                "pencil",
                "corollary",
            ] {
                steps.push(skip(name, "cf check failed"));
            }
            return Ok(Report::new(&self.scenario.name, steps, None));
        }
        steps.push(self.configuration_step()?);
        steps.push(self.invariants_step()?);
        steps.push(self.complement_step()?);
        steps.push(self.enumeration_step()?);
        steps.push(self.extension_step()?);
        steps.push(self.meridian_step()?);
        steps.push(self.wall_step()?);
        steps.push(self.certificate_step()?);
        steps.push(self.monodromy_step()?);
        steps.push(self.pencil_step()?);
        steps.push(self.corollary_step()?);
        let conclusion = conclusion(&steps);
        Ok(Report::new(&self.scenario.name, steps, conclusion))
    }
}

/// The exoticness line needs every prerequisite to have run and passed, the
/// enumeration to leave exactly `±K` in dimension 0, and a wall between the chambers.
fn conclusion(steps: &[Step]) -> Option<String> {
    let get = |name: &str| steps.iter().find(|s| s.step == name);
    let required = ["cf_check", "configuration", "invariants", "complement", "enumeration", "extension", "wall"];
    if !required.iter().all(|n| get(n).is_some_and(|s| s.status == Status::Pass)) {
        return None;
    }
    let enumeration = &get("enumeration")?.values;
    let two = enumeration["survivors"].as_array().is_some_and(|s| s.len() == 2);
    let dims_zero = enumeration["dimensions"].as_array().is_some_and(|d| d.iter().all(|x| x == &json!(0)));
    let wall = get("wall")?.values["outcome"] == json!("wall");
    let extends = get("extension")?.values["extends"] == json!(true);
    (two && dims_zero && wall && extends).then(|| CONCLUSION.to_string())
}

pub fn run_scenario(path: &Path, options: RunOptions) -> Result<Report> {
    Runner::new(load_scenario(path)?, options)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pass(name: &str, values: Value) -> Step {
        Step { step: name.into(), status: Status::Pass, detail: String::new(), values }
    }

    fn full() -> Vec<Step> {
        vec![
            pass("cf_check", Value::Null),
            pass("configuration", Value::Null),
            pass("invariants", Value::Null),
            pass("complement", Value::Null),
            pass("enumeration", json!({"survivors": [[1], [-1]], "dimensions": [0, 0]})),
            pass("extension", json!({"extends": true})),
            pass("wall", json!({"outcome": "wall"})),
        ]
    }

    #[test]
    fn conclusion_needs_every_prerequisite() {
        assert_eq!(conclusion(&full()).as_deref(), Some(CONCLUSION));
        for i in 0..full().len() {
            let mut steps = full();
            steps[i].status = Status::Skip;
            assert_eq!(conclusion(&steps), None, "step {i} skipped");
        }
        let mut steps = full();
        steps[6].values = json!({"outcome": "same"});
        assert_eq!(conclusion(&steps), None);
        let mut steps = full();
        steps[4].values = json!({"survivors": [[1], [-1]], "dimensions": [2, 2]});
        assert_eq!(conclusion(&steps), None);
    }

    #[test]
    fn scenario_files_are_strict() {
        let bad_field: std::result::Result<Scenario, _> =
            serde_json::from_str(r#"{"schema": 1, "name": "a", "chian": {}}"#);
        assert!(bad_field.is_err());
        let dir = std::env::temp_dir().join(format!("exotic-schema-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s.json");
        std::fs::write(&path, r#"{"schema": 2, "name": "a"}"#).unwrap();
        assert!(matches!(load_scenario(&path), Err(Error::Scenario(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn classes_accept_text_or_coefficients() {
        let text: ClassSpec = serde_json::from_value(json!("h-e1-e2")).unwrap();
        let coeffs: ClassSpec = serde_json::from_value(json!([1, -1, -1])).unwrap();
        assert_eq!(text.resolve(2).unwrap(), coeffs.resolve(2).unwrap());
        assert!(coeffs.resolve(3).is_err());
    }
}
