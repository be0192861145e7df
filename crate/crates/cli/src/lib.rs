//! Command implementations behind the `priccati` binary. Each command returns
//! an [`Output`] holding the exit code, a JSON report and a text report, so
//! the same code path serves the binary and the tests.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use priccati::algebra::{FiniteField, RatFunc};
use priccati::expr::{parse_bivariate, parse_element, parse_poly, parse_ratfunc};
use priccati::ore::{central_operator, reconstruct_factor, right_divmod, OrePoly, RationalFunctions};
use priccati::{is_reducible, solve, CurveField, Error, FFElem, IrreducibilityReport, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

/// One problem instance as given on the command line.
#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub p: u64,
    pub ext_degree: usize,
    /// Modulus of F_q as a polynomial in z; the canonical one when absent.
    pub ext_modulus: Option<String>,
    pub nstar: String,
    pub seed: u64,
    pub max_level: Option<usize>,
    pub verbose: bool,
}

impl InstanceSpec {
    pub fn new(p: u64, nstar: &str) -> Self {
        InstanceSpec {
            p,
            ext_degree: 1,
            ext_modulus: None,
            nstar: nstar.to_string(),
            seed: 0,
            max_level: None,
            verbose: false,
        }
    }

    pub fn with_ext_degree(mut self, b: usize) -> Self {
        self.ext_degree = b;
        self
    }

    pub fn base_field(&self) -> priccati::Result<Arc<FiniteField>> {
        match &self.ext_modulus {
            None => FiniteField::canonical(self.p, self.ext_degree),
            Some(m) => {
                let fp = FiniteField::prime(self.p)?;
                let poly = parse_poly(&fp, m, 'z')?;
                if poly.deg() != self.ext_degree as i64 && self.ext_degree != 1 {
                    return Err(Error::Parse(format!(
                        "modulus of degree {} but extension degree {}",
                        poly.deg(),
                        self.ext_degree
                    )));
                }
                let ints: Vec<i64> = poly.coeffs().iter().map(|c| fp.as_prime(c).unwrap() as i64).collect();
                FiniteField::with_modulus(self.p, &ints)
            }
        }
    }

    pub fn curve(&self) -> priccati::Result<Arc<CurveField>> {
        let base = self.base_field()?;
        let nstar = parse_bivariate(&base, &self.nstar)?;
        CurveField::new(&base, nstar, self.seed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceJson {
    pub p: u64,
    pub ext_degree: usize,
    pub modulus: String,
    pub nstar: String,
    pub seed: u64,
    pub d_x: usize,
    pub d_y: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceJson {
    pub center: String,
    pub ram_index: usize,
    pub residue_degree: usize,
    pub eta: i64,
    pub local: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WitnessJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TimingJson {
    pub stage: String,
    pub millis: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub instance: Option<InstanceJson>,
    pub verdict: String,
    pub witness: Option<WitnessJson>,
    pub places: Vec<PlaceJson>,
    pub timings: Vec<TimingJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Output {
    pub code: i32,
    pub report: Report,
    pub text: String,
}

impl Output {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("report serializes")
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::WildRamification { .. } => EXIT_UNSUPPORTED,
        Error::IncompleteSearch { .. } => EXIT_INCOMPLETE,
        _ => EXIT_INPUT,
    }
}

struct Timer {
    on: bool,
    start: Instant,
    stages: Vec<TimingJson>,
}

impl Timer {
    fn new(on: bool) -> Self {
        Timer { on, start: Instant::now(), stages: Vec::new() }
    }

    fn lap(&mut self, stage: &str) {
        if self.on {
            let now = Instant::now();
            self.stages.push(TimingJson { stage: stage.to_string(), millis: (now - self.start).as_secs_f64() * 1e3 });
            self.start = now;
        }
    }
}

fn instance_json(spec: &InstanceSpec, curve: &CurveField) -> InstanceJson {
    InstanceJson {
        p: spec.p,
        ext_degree: curve.base().degree(),
        modulus: curve.base().modulus_string(),
        nstar: curve.nstar_string(),
        seed: spec.seed,
        d_x: curve.dx(),
        d_y: curve.dy(),
    }
}

fn places_json(rep: &IrreducibilityReport) -> Vec<PlaceJson> {
    rep.places
        .iter()
        .map(|r| PlaceJson {
            center: r.center.clone(),
            ram_index: r.ram_index,
            residue_degree: r.residue_degree,
            eta: r.eta,
            local: match r.solvable {
                None => "no condition".into(),
                Some(true) => "solvable".into(),
                Some(false) => "unsolvable".into(),
            },
        })
        .collect()
}

fn failure(e: &Error, instance: Option<InstanceJson>) -> Output {
    let code = exit_code(e);
    let verdict = match code {
        EXIT_UNSUPPORTED => "unsupported",
        EXIT_INCOMPLETE => "incomplete",
        _ => "error",
    };
    Output {
        code,
        report: Report {
            instance,
            verdict: verdict.into(),
            witness: None,
            places: Vec::new(),
            timings: Vec::new(),
            error: Some(e.to_string()),
        },
        text: format!("error: {e}\n"),
    }
}

fn header(inst: &InstanceJson) -> String {
    let field = if inst.ext_degree == 1 {
        format!("F_{}", inst.p)
    } else {
        format!("F_{}^{} = F_{}[z]/({})", inst.p, inst.ext_degree, inst.p, inst.modulus)
    };
    format!("instance: N_* = {} over {field}\n", inst.nstar)
}

fn places_text(places: &[PlaceJson]) -> String {
    let mut s = String::from("places:\n");
    let w = places.iter().map(|p| p.center.len()).max().unwrap_or(6).max(6);
    s.push_str(&format!("  {:<w$}  {:>3}  {:>3}  {:>5}  local\n", "center", "e", "f", "eta"));
    for p in places {
        s.push_str(&format!(
            "  {:<w$}  {:>3}  {:>3}  {:>5}  {}\n",
            p.center, p.ram_index, p.residue_degree, p.eta, p.local
        ));
    }
    s
}

/// Largest max(deg num, deg den) over the coefficients of an operator.
pub fn operator_degree(l: &OrePoly<RationalFunctions>) -> usize {
    l.coeffs().iter().map(|c| c.height()).max().unwrap_or(0)
}

pub fn cmd_irreducible(spec: &InstanceSpec) -> Output {
    let mut timer = Timer::new(spec.verbose);
    let curve = match spec.curve() {
        Ok(c) => c,
        Err(e) => return failure(&e, None),
    };
    let inst = instance_json(spec, &curve);
    timer.lap("parse");
    let rep = match is_reducible(&curve) {
        Ok(r) => r,
        Err(e) => return failure(&e, Some(inst)),
    };
    timer.lap("irreducibility");
    let places = places_json(&rep);
    let text = format!("{}verdict: {}\n{}", header(&inst), rep.verdict, places_text(&places));
    Output {
        code: EXIT_OK,
        report: Report {
            instance: Some(inst),
            verdict: rep.verdict.to_string(),
            witness: None,
            places,
            timings: timer.stages,
            error: None,
        },
        text,
    }
}

/// Shared front half of solve and factor.
fn run_solver(
    spec: &InstanceSpec,
    timer: &mut Timer,
) -> Result<(Arc<CurveField>, InstanceJson, priccati::SolveOutcome), Output> {
    let curve = spec.curve().map_err(|e| failure(&e, None))?;
    let inst = instance_json(spec, &curve);
    timer.lap("parse");
    let out = solve(&curve, spec.max_level).map_err(|e| failure(&e, Some(inst.clone())))?;
    timer.lap("solve");
    Ok((curve, inst, out))
}

pub fn cmd_solve(spec: &InstanceSpec) -> Output {
    let mut timer = Timer::new(spec.verbose);
    let (_, inst, out) = match run_solver(spec, &mut timer) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let places = places_json(&out.report);
    let mut text = format!("{}verdict: {}\n", header(&inst), out.report.verdict);
    let witness = out.solution.as_ref().map(|f| {
        let verified = f.is_solution();
        text.push_str(&format!(
            "solution: {f}\nverified: {}\ncoefficient degree: {}\nlevel: {}\n",
            if verified { "yes" } else { "no" },
            f.coefficient_degree(),
            out.level.unwrap_or(0)
        ));
        WitnessJson {
            solution: Some(f.to_string()),
            verified: Some(verified),
            coefficient_degree: Some(f.coefficient_degree()),
            level: out.level,
            ..Default::default()
        }
    });
    if witness.is_none() {
        text.push_str("no solution (irreducible)\n");
    }
    Output {
        code: EXIT_OK,
        report: Report {
            instance: Some(inst),
            verdict: out.report.verdict.to_string(),
            witness,
            places,
            timings: timer.stages,
            error: None,
        },
        text,
    }
}

pub fn cmd_factor(spec: &InstanceSpec) -> Output {
    let mut timer = Timer::new(spec.verbose);
    let (curve, inst, out) = match run_solver(spec, &mut timer) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let places = places_json(&out.report);
    let mut text = format!("{}verdict: {}\n", header(&inst), out.report.verdict);
    let mut witness = None;
    if let Some(f) = &out.solution {
        let l = match reconstruct_factor(&curve, f) {
            Ok(l) => l,
            Err(e) => return failure(&e, Some(inst)),
        };
        timer.lap("reconstruct");
        let divides = right_divmod(&central_operator(&curve), &l).map(|(_, r)| r.is_zero()).unwrap_or(false);
        timer.lap("divisibility");
        let coefficients: Vec<String> = l.coeffs().iter().map(|c| c.format("x")).collect();
        text.push_str(&format!(
            "factor: {l}\ncoefficients: {}\norder: {}\nright-divides N(D^p): {}\ncoefficient degree: {}\n",
            coefficients.join("; "),
            l.order().unwrap_or(0),
            if divides { "yes" } else { "no" },
            operator_degree(&l)
        ));
        witness = Some(WitnessJson {
            factor: Some(l.to_string()),
            coefficients: Some(coefficients),
            order: l.order(),
            verified: Some(divides),
            coefficient_degree: Some(operator_degree(&l)),
            level: out.level,
            ..Default::default()
        });
    } else {
        text.push_str("irreducible; no factor\n");
    }
    Output {
        code: EXIT_OK,
        report: Report {
            instance: Some(inst),
            verdict: out.report.verdict.to_string(),
            witness,
            places,
            timings: timer.stages,
            error: None,
        },
        text,
    }
}

/// What `verify` checks.
#[derive(Clone, Debug)]
pub enum Claim {
    /// An element of K_N in x, a and z.
    Solution(String),
    /// Operator coefficients c_0; c_1; ...; c_m in x and z, lowest order first.
    Factor(String),
}

pub fn parse_operator(base: &Arc<FiniteField>, s: &str) -> priccati::Result<OrePoly<RationalFunctions>> {
    let coeffs = s.split(';').map(|c| parse_ratfunc(base, c.trim())).collect::<priccati::Result<Vec<RatFunc>>>()?;
    Ok(OrePoly::new(&RationalFunctions(base.clone()), coeffs))
}

pub fn cmd_verify(spec: &InstanceSpec, claim: &Claim) -> Output {
    let curve = match spec.curve() {
        Ok(c) => c,
        Err(e) => return failure(&e, None),
    };
    let inst = instance_json(spec, &curve);
    let (valid, witness, detail) = match claim {
        Claim::Solution(s) => {
            let f: FFElem = match parse_element(&curve, s) {
                Ok(f) => f,
                Err(e) => return failure(&e, Some(inst)),
            };
            let ok = f.is_solution();
            let w = WitnessJson { solution: Some(f.to_string()), verified: Some(ok), ..Default::default() };
            (ok, w, format!("solution: {f}\n"))
        }
        Claim::Factor(s) => {
            let l = match parse_operator(curve.base(), s) {
                Ok(l) => l,
                Err(e) => return failure(&e, Some(inst)),
            };
            let order = l.order().unwrap_or(0);
            let nontrivial = order >= 1 && order < curve.p() as usize * curve.dy();
            let divides = right_divmod(&central_operator(&curve), &l).map(|(_, r)| r.is_zero()).unwrap_or(false);
            let ok = nontrivial && divides;
            let w = WitnessJson {
                factor: Some(l.to_string()),
                order: Some(order),
                verified: Some(ok),
                ..Default::default()
            };
            (ok, w, format!("factor: {l}\n"))
        }
    };
    let verdict = if valid { "valid" } else { "invalid" };
    Output {
        code: if valid { EXIT_OK } else { EXIT_INPUT },
        text: format!("{}{detail}verdict: {verdict}\n", header(&inst)),
        report: Report {
            instance: Some(inst),
            verdict: verdict.into(),
            witness: Some(witness),
            places: Vec::new(),
            timings: Vec::new(),
            error: None,
        },
    }
}

/// The instance N_* = den(g) Y - num(g), for which a = g.
pub fn rational_nstar(g: &RatFunc) -> String {
    let den = g.den().format("x");
    let num = g.num().format("x");
    format!("({den})*Y - ({num})")
}

/// Verdict of a report, when it carries one.
pub fn verdict_of(out: &Output) -> Option<Verdict> {
    match out.report.verdict.as_str() {
        "reducible" => Some(Verdict::Reducible),
        "irreducible" => Some(Verdict::Irreducible),
        _ => None,
    }
}
