//! Many-one reductions `(f, g)` from `P` to `Q`: whenever `z` solves `f(x)`
//! in `Q`, `g(x, z)` solves `x` in `P`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::vm::{library, run, PolyBound, VerifierProgram};

use super::problem::{all_witnesses, verify_solution, TfnpProblem};
use super::TfnpError;

/// A polynomial-time function of a fixed number of bit strings.
pub trait Transformer: Send + Sync {
    fn arity(&self) -> usize;
    fn apply(&self, inputs: &[&BitString]) -> Result<BitString, TfnpError>;
    fn name(&self) -> String;
    fn program(&self) -> Option<&VerifierProgram> {
        None
    }
}

impl Transformer for VerifierProgram {
    fn arity(&self) -> usize {
        self.arity
    }

    fn apply(&self, inputs: &[&BitString]) -> Result<BitString, TfnpError> {
        Ok(run(self, inputs)?.output)
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn program(&self) -> Option<&VerifierProgram> {
        Some(self)
    }
}

type NativeFn = dyn Fn(&[&BitString]) -> Result<BitString, TfnpError> + Send + Sync;

#[derive(Clone)]
pub struct NativeTransformer {
    name: String,
    arity: usize,
    f: Arc<NativeFn>,
}

impl NativeTransformer {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        f: impl Fn(&[&BitString]) -> Result<BitString, TfnpError> + Send + Sync + 'static,
    ) -> Self {
        NativeTransformer { name: name.into(), arity, f: Arc::new(f) }
    }
}

impl Transformer for NativeTransformer {
    fn arity(&self) -> usize {
        self.arity
    }

    fn apply(&self, inputs: &[&BitString]) -> Result<BitString, TfnpError> {
        if inputs.len() != self.arity {
            return Err(TfnpError::Arity { expected: self.arity, found: inputs.len() });
        }
        (self.f)(inputs)
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

#[derive(Clone)]
pub struct ManyOneReduction {
    pub name: String,
    /// Instance map, arity 1.
    pub f: Arc<dyn Transformer>,
    /// Witness back-map on `(x, z)`, arity 2.
    pub g: Arc<dyn Transformer>,
    /// Declared bound on `|f(x)|`; `None` for reductions that are not
    /// polynomial in `|x|`.
    pub f_bound: Option<PolyBound>,
}

impl std::fmt::Debug for ManyOneReduction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManyOneReduction")
            .field("name", &self.name)
            .field("f", &self.f.name())
            .field("g", &self.g.name())
            .finish()
    }
}

impl ManyOneReduction {
    pub fn new(name: impl Into<String>, f: Arc<dyn Transformer>, g: Arc<dyn Transformer>) -> Self {
        assert_eq!((f.arity(), g.arity()), (1, 2), "reduction maps have arities 1 and 2");
        ManyOneReduction { name: name.into(), f, g, f_bound: None }
    }

    pub fn with_f_bound(mut self, b: PolyBound) -> Self {
        self.f_bound = Some(b);
        self
    }

    pub fn map_instance(&self, x: &BitString) -> Result<BitString, TfnpError> {
        self.f.apply(&[x])
    }

    pub fn map_witness(&self, x: &BitString, z: &BitString) -> Result<BitString, TfnpError> {
        self.g.apply(&[x, z])
    }
}

/// `f = id`, `g(x, z) = z`, both as shipped bytecode.
pub fn identity_reduction() -> ManyOneReduction {
    ManyOneReduction::new("identity", Arc::new(library::identity()), Arc::new(library::second()))
        .with_f_bound(PolyBound::linear())
}

/// `P → S` from `P → Q` and `Q → S`: `f = f₂∘f₁`, `g(x, w) = g₁(x, g₂(f₁(x), w))`.
pub fn compose(first: &ManyOneReduction, second: &ManyOneReduction) -> ManyOneReduction {
    let (f1, f2) = (first.f.clone(), second.f.clone());
    let f = NativeTransformer::new(format!("{}∘{}", f2.name(), f1.name()), 1, move |v| {
        let mid = f1.apply(&[v[0]])?;
        f2.apply(&[&mid])
    });
    let (f1, g1, g2) = (first.f.clone(), first.g.clone(), second.g.clone());
    let g = NativeTransformer::new(format!("{}∘{}", g1.name(), g2.name()), 2, move |v| {
        let mid = f1.apply(&[v[0]])?;
        let z = g2.apply(&[&mid, v[1]])?;
        g1.apply(&[v[0], &z])
    });
    ManyOneReduction::new(format!("{};{}", first.name, second.name), Arc::new(f), Arc::new(g))
}

/// Solves `x` in `source` through `target`'s solver and checks the result.
pub fn apply_many_one(
    red: &ManyOneReduction,
    source: &TfnpProblem,
    solver: &dyn Fn(&BitString) -> Result<BitString, TfnpError>,
    x: &BitString,
) -> Result<BitString, TfnpError> {
    let fx = red.map_instance(x)?;
    let z = solver(&fx)?;
    let y = red.map_witness(x, &z)?;
    if verify_solution(source, x, &y)? {
        Ok(y)
    } else {
        Err(TfnpError::ReductionUnsound { reduction: red.name.clone(), instance: x.to_hex(), witness: z.to_hex() })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessCheck {
    pub z: BitString,
    pub back: Option<BitString>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub instance: BitString,
    pub image_len: usize,
    pub witnesses: Vec<WitnessCheck>,
    pub error: Option<String>,
    /// The error came from a sweep or gate limit rather than the reduction.
    pub resource_limit: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub reduction: String,
    pub source: String,
    pub target: String,
    pub cases: Vec<CaseReport>,
    pub pass: bool,
}

impl ReductionReport {
    pub fn first_failure(&self) -> Option<&CaseReport> {
        self.cases.iter().find(|c| !c.ok)
    }

    pub fn witnesses_checked(&self) -> usize {
        self.cases.iter().map(|c| c.witnesses.len()).sum()
    }
}

fn check_case(red: &ManyOneReduction, source: &TfnpProblem, target: &TfnpProblem, x: &BitString) -> CaseReport {
    let mut case = CaseReport {
        instance: x.clone(),
        image_len: 0,
        witnesses: Vec::new(),
        error: None,
        resource_limit: false,
        ok: false,
    };
    let fx = match red.map_instance(x) {
        Ok(v) => v,
        Err(e) => {
            case.resource_limit = e.is_resource_limit();
            case.error = Some(e.to_string());
            return case;
        }
    };
    case.image_len = fx.len();
    if let Some(b) = red.f_bound {
        if fx.len() > b.eval(x.len()) {
            case.error = Some(format!("|f(x)| = {} exceeds {}", fx.len(), b));
            return case;
        }
    }
    let zs = match all_witnesses(target, &fx) {
        Ok(zs) if zs.is_empty() => {
            case.error = Some(format!("{} has no witness on f(x)", target.name));
            return case;
        }
        Ok(zs) => zs,
        Err(e) => {
            case.resource_limit = e.is_resource_limit();
            case.error = Some(e.to_string());
            return case;
        }
    };
    let mut ok = true;
    for z in zs {
        let back = red.map_witness(x, &z).ok();
        let good = match &back {
            Some(y) => verify_solution(source, x, y).unwrap_or(false),
            None => false,
        };
        ok &= good;
        case.witnesses.push(WitnessCheck { z, back, ok: good });
    }
    case.ok = ok;
    case
}

/// Checks the reduction contract for every target witness of every `f(x)`.
pub fn check_many_one(
    red: &ManyOneReduction,
    source: &TfnpProblem,
    target: &TfnpProblem,
    domain: &[BitString],
) -> ReductionReport {
    let cases: Vec<CaseReport> = domain.par_iter().map(|x| check_case(red, source, target, x)).collect();
    let pass = cases.iter().all(|c| c.ok);
    ReductionReport {
        reduction: red.name.clone(),
        source: source.name.clone(),
        target: target.name.clone(),
        cases,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfnp::{factoring_problem, pigeon_problem, solve_brute, PigeonMap};

    fn nums(r: std::ops::RangeInclusive<u64>) -> Vec<BitString> {
        r.map(BitString::from_num).collect()
    }

    #[test]
    fn identity_passes() {
        let p = factoring_problem();
        let report = check_many_one(&identity_reduction(), &p, &p, &nums(0..=40));
        assert!(report.pass);
        assert!(report.witnesses_checked() > 41);
        let x = BitString::from_num(21);
        let y = apply_many_one(&identity_reduction(), &p, &|v| solve_brute(&p, v), &x).unwrap();
        assert_eq!(y, BitString::from_num(3));
    }

    #[test]
    fn broken_back_map_fails() {
        let p = factoring_problem();
        let broken = ManyOneReduction::new("broken", Arc::new(library::identity()), Arc::new(library::drop_last()));
        let report = check_many_one(&broken, &p, &p, &nums(2..=20));
        assert!(!report.pass);
        let bad = report.first_failure().unwrap();
        assert!(bad.witnesses.iter().any(|w| !w.ok));
        let err = apply_many_one(&broken, &p, &|v| solve_brute(&p, v), &BitString::from_num(15)).unwrap_err();
        assert!(matches!(err, TfnpError::ReductionUnsound { .. }));
    }

    #[test]
    fn composition_of_identities() {
        let p = pigeon_problem(PigeonMap::Mod(3));
        let id = identity_reduction();
        let twice = compose(&id, &id);
        assert!(check_many_one(&twice, &p, &p, &nums(0..=12)).pass);
    }
}
