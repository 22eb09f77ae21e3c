//! Proof systems for satisfiability: the standard one, where a proof is a
//! formula with a satisfying assignment, and one that also accepts the bare
//! formula `γ_n` stating that `n` is composite, whenever it is.

use std::sync::Arc;

use crate::prop::{read_dimacs, write_dimacs, BoolCircuit, CircuitBuilder, Cnf, Gate, Lit, PropFormula, Wire};

use super::proofsys::{Checker, ProofSystem, SoundnessDomain};

/// Equisatisfiable CNF asserting output 0 of a plain circuit. Input `i` is
/// variable `i + 1`; gate variables follow the inputs.
pub fn circuit_cnf(c: &BoolCircuit) -> Cnf {
    let mut cnf = Cnf::new(c.input_width as u32);
    let mut lit: Vec<Lit> = Vec::with_capacity(c.gates.len());
    let fresh = |cnf: &mut Cnf| {
        cnf.num_vars += 1;
        cnf.num_vars as Lit
    };
    for gate in &c.gates {
        let l = match *gate {
            Gate::Input(i) => i as Lit + 1,
            Gate::Const(b) => {
                let v = fresh(&mut cnf);
                cnf.add_clause(vec![if b { v } else { -v }]);
                v
            }
            Gate::Not(a) => -lit[a],
            Gate::And(a, b) => {
                let (la, lb) = (lit[a], lit[b]);
                let g = fresh(&mut cnf);
                cnf.add_clause(vec![-g, la]);
                cnf.add_clause(vec![-g, lb]);
                cnf.add_clause(vec![g, -la, -lb]);
                g
            }
            Gate::Or(a, b) => {
                let (la, lb) = (lit[a], lit[b]);
                let g = fresh(&mut cnf);
                cnf.add_clause(vec![g, -la]);
                cnf.add_clause(vec![g, -lb]);
                cnf.add_clause(vec![-g, la, lb]);
                g
            }
            Gate::Oracle { .. } | Gate::Answer { .. } => panic!("oracle gates have no CNF encoding"),
        };
        lit.push(l);
    }
    cnf.add_clause(vec![lit[c.outputs[0]]]);
    cnf
}

fn bit_width(n: u64) -> usize {
    (64 - n.leading_zeros() as usize).max(1)
}

fn ripple_add(b: &mut CircuitBuilder, x: &[Wire], y: &[Wire]) -> Vec<Wire> {
    let mut carry = b.constant(false);
    let mut out = Vec::with_capacity(x.len());
    for (&p, &q) in x.iter().zip(y) {
        let t = b.xor(p, q);
        out.push(b.xor(t, carry));
        let g = b.and(p, q);
        let h = b.and(t, carry);
        carry = b.or(g, h);
    }
    out
}

/// `1 < a ∧ 1 < b ∧ a·b = n` over `w = bits(n)`-bit factors. Input `2i` is
/// bit `i` of `a` and input `2i + 1` is bit `i` of `b`, least significant
/// first; the product is computed in `2w` bits, so it cannot overflow.
pub fn gamma_circuit(n: u64) -> BoolCircuit {
    let w = bit_width(n);
    let mut b = CircuitBuilder::new(2 * w, usize::MAX);
    let a: Vec<Wire> = (0..w).map(|i| b.input(2 * i)).collect();
    let c: Vec<Wire> = (0..w).map(|i| b.input(2 * i + 1)).collect();
    let zero = b.constant(false);
    let mut acc = vec![zero; 2 * w];
    for (i, &ci) in c.iter().enumerate() {
        let mut partial = vec![zero; 2 * w];
        for (j, &aj) in a.iter().enumerate() {
            partial[i + j] = b.and(aj, ci);
        }
        acc = ripple_add(&mut b, &acc, &partial);
    }
    let eq: Vec<Wire> = acc
        .iter()
        .enumerate()
        .map(|(i, &s)| if i < 64 && n >> i & 1 == 1 { s } else { b.not(s) })
        .collect();
    let product_ok = b.and_all(&eq);
    let a_big = b.or_all(&a[1..]);
    let c_big = b.or_all(&c[1..]);
    let both = b.and(a_big, c_big);
    let out = b.and(both, product_ok);
    b.finish(vec![out]).expect("uncapped builder")
}

/// The CNF `γ_n`, normalized.
pub fn gamma_cnf(n: u64) -> Cnf {
    circuit_cnf(&gamma_circuit(n)).normalized()
}

/// The factors read from a model of `γ_n`.
pub fn gamma_factors(n: u64, values: &[bool]) -> (u64, u64) {
    let w = bit_width(n);
    let read = |off: usize| (0..w).fold(0u64, |acc, i| acc | u64::from(values[2 * i + off]) << i);
    (read(0), read(1))
}

/// `γ_n` as DIMACS text whose first line is the comment `c gamma n`.
pub fn gamma_proof(n: u64) -> Vec<u8> {
    format!("c gamma {n}\n{}", write_dimacs(&gamma_cnf(n))).into_bytes()
}

pub fn is_composite(n: u64) -> bool {
    n >= 4 && (2..).take_while(|d| d * d <= n).any(|d| n % d == 0)
}

/// `<φ>:<bits>` with one `0`/`1` per variable `x1..=x_max`.
pub fn sat_proof(phi: &PropFormula, values: &[bool]) -> Vec<u8> {
    let bits: String = values.iter().map(|&v| if v { '1' } else { '0' }).collect();
    format!("{phi}:{bits}").into_bytes()
}

fn check_sat_proof(text: &str) -> Option<PropFormula> {
    let (formula, bits) = text.rsplit_once(':')?;
    let phi: PropFormula = formula.parse().ok()?;
    if bits.len() != phi.max_var() as usize || bits.bytes().any(|b| b != b'0' && b != b'1') {
        return None;
    }
    let bits = bits.as_bytes();
    phi.eval_with(&|i| bits[i as usize - 1] == b'1').then_some(phi)
}

fn check_bare_gamma(text: &str) -> Option<PropFormula> {
    let (first, rest) = text.split_once('\n')?;
    let n: u64 = first.strip_prefix("c gamma ")?.parse().ok()?;
    if n > 1 << 20 || !is_composite(n) {
        return None;
    }
    let cnf = read_dimacs(rest).ok()?;
    let gamma = gamma_cnf(n);
    (cnf == gamma).then(|| gamma.to_formula())
}

fn satisfiable_default() -> PropFormula {
    PropFormula::var(1)
}

pub fn standard_sat_system() -> ProofSystem {
    let checker: Checker = Arc::new(|proof| check_sat_proof(std::str::from_utf8(proof).ok()?));
    ProofSystem::new("sat-standard", SoundnessDomain::Sat, satisfiable_default(), checker)
}

/// The standard system plus bare `γ_n` for composite `n`, checked by trial
/// division instead of an assignment.
pub fn composite_sat_system() -> ProofSystem {
    let checker: Checker = Arc::new(|proof| {
        let text = std::str::from_utf8(proof).ok()?;
        check_sat_proof(text).or_else(|| check_bare_gamma(text))
    });
    ProofSystem::new("sat-composite", SoundnessDomain::Sat, satisfiable_default(), checker)
}
