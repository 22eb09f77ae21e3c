//! Shipped programs. Fixed programs live as assembly files under
//! `programs/`; parameterized ones are generated here.

use super::asm::parse_program;
use super::bound::PolyBound;
use super::program::VerifierProgram;

fn load(src: &str) -> VerifierProgram {
    parse_program(src).expect("shipped program assembles")
}

pub fn equality() -> VerifierProgram {
    load(include_str!("../../programs/equality.asm"))
}

pub fn xor() -> VerifierProgram {
    load(include_str!("../../programs/xor.asm"))
}

pub fn accept_all() -> VerifierProgram {
    load(include_str!("../../programs/accept_all.asm"))
}

pub fn divides() -> VerifierProgram {
    load(include_str!("../../programs/divides.asm"))
}

pub fn factoring_verifier() -> VerifierProgram {
    load(include_str!("../../programs/factoring.asm"))
}

pub fn identity() -> VerifierProgram {
    load(include_str!("../../programs/identity.asm"))
}

pub fn second() -> VerifierProgram {
    load(include_str!("../../programs/second.asm"))
}

pub fn drop_last() -> VerifierProgram {
    load(include_str!("../../programs/drop_last.asm"))
}

pub fn reverse_pad() -> VerifierProgram {
    load(include_str!("../../programs/reverse_pad.asm"))
}

pub fn query_once() -> VerifierProgram {
    load(include_str!("../../programs/query_once.asm"))
}

pub fn add2_via_succ() -> VerifierProgram {
    load(include_str!("../../programs/add2_via_succ.asm"))
}

/// Accepts `(x, y)` iff `|y| = |x|` and `y = x + k mod 2^|x|`.
pub fn add_const_verifier(name: &str, k: u32) -> VerifierProgram {
    load(&format!(
        "
.name {name}
.arity 2
.regs 10
.budget 8 1 16
    const r7 1
    const r8 {k}          ; addend bits not yet consumed, low bit first
    len r0 0
    len r1 1
    eq r2 r0 r1
    jz r2 no
loop:
    jz r0 done            ; r0 counts positions down, r3 is the carry
    sub r0 r0 r7
    and r5 r8 r7
    shr r8 r8 r7
    bit r6 0 r0
    xor r9 r6 r5
    xor r2 r9 r3          ; sum bit
    and r6 r6 r5
    and r9 r9 r3
    or r3 r6 r9
    bit r6 1 r0
    xor r2 r2 r6
    or r4 r4 r2           ; r4 = some position differs
    jmp loop
done:
    jz r4 yes
no:
    reject
yes:
    accept
"
    ))
}

/// On `(x, u)` outputs bits `[o, o + L)` of `u`, where `L = bound(|x|) + 1`
/// and `o = 2·bits(L) + 2`. When `u` starts with the pair code of a string of
/// length `L`, this is that string.
pub fn project_first(bound: PolyBound) -> VerifierProgram {
    let PolyBound { c, k, d } = bound;
    let budget = PolyBound::new(6 * c + 6, k.max(1), 6 * d + 4 * u64::from(k) + 256);
    load(&format!(
        "
.name project_first
.arity 2
.regs 8
.budget {} {} {}
    const r7 1
    len r0 0
    const r1 {c}
    const r2 {k}
pow:
    jz r2 powdone
    mul r1 r1 r0
    sub r2 r2 r7
    jmp pow
powdone:
    const r2 {}
    add r1 r1 r2          ; r1 = L
    mov r3 r1
bits:
    jz r3 bitsdone
    shr r3 r3 r7
    add r4 r4 r7          ; r4 = bits(L)
    jmp bits
bitsdone:
    add r4 r4 r4
    const r2 2
    add r4 r4 r2          ; r4 = o
    add r5 r4 r1
loop:
    eq r3 r4 r5
    jnz r3 done
    bit r3 1 r4
    out r3
    add r4 r4 r7
    jmp loop
done:
    accept
",
        budget.c,
        budget.k,
        budget.d,
        d + 1
    ))
}

/// Every shipped accept-mode verifier.
pub fn shipped_verifiers() -> Vec<VerifierProgram> {
    vec![
        equality(),
        xor(),
        accept_all(),
        divides(),
        factoring_verifier(),
        add_const_verifier("succ", 1),
        add_const_verifier("add2", 2),
    ]
}

/// Every shipped oracle-free function program.
pub fn shipped_functions() -> Vec<VerifierProgram> {
    vec![identity(), second(), drop_last(), reverse_pad(), project_first(PolyBound::new(1, 1, 1))]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::vm::{compile_program, compile_to_circuit, run, InputSpec, OutputMode, DEFAULT_GATE_CAP};

    fn accepts(p: &VerifierProgram, x: &BitString, y: &BitString) -> bool {
        run(p, &[x, y]).unwrap().accepted
    }

    fn num(n: u64) -> BitString {
        BitString::from_num(n)
    }

    fn factoring_oracle(n: &BitString, m: &BitString) -> bool {
        if m.len() > n.len() {
            return false;
        }
        if n.len() > 17 {
            return true;
        }
        let Some(mv) = m.canonical_value() else { return false };
        let nv = n.value().unwrap();
        let prime = nv >= 2 && (2..nv).all(|d| nv % d != 0);
        nv <= 1 || prime || (1 < mv && mv < nv && nv % mv == 0)
    }

    #[test]
    fn equality_and_xor() {
        let e = equality();
        assert!(accepts(&e, &"01".into(), &"01".into()));
        assert!(!accepts(&e, &"01".into(), &"10".into()));
        assert!(!accepts(&e, &"01".into(), &"010".into()));
        let x = xor();
        assert!(accepts(&x, &"1".into(), &"0".into()));
        assert!(!accepts(&x, &"1".into(), &"1".into()));
    }

    #[test]
    fn divides_hand_run() {
        assert!(accepts(&divides(), &"1111".into(), &"11".into()));
        assert!(!accepts(&divides(), &"1111".into(), &"10".into()));
        assert!(!accepts(&divides(), &"1111".into(), &BitString::new()));
    }

    #[test]
    fn factoring_matches_oracle_within_budget() {
        let p = factoring_verifier();
        for nv in 0u64..300 {
            let n = num(nv);
            for m in BitString::all_up_to(n.len()) {
                assert_eq!(accepts(&p, &n, &m), factoring_oracle(&n, &m), "N={nv} M={m}");
            }
        }
        // the largest desk-scale widths stay within budget
        for nv in [(1u64 << 17) - 1, (1 << 17) - 15, 65521, 1 << 16] {
            let n = num(nv);
            for mv in [0u64, 3, 255, nv - 1] {
                let m = num(mv);
                assert_eq!(accepts(&p, &n, &m), factoring_oracle(&n, &m));
            }
        }
        assert!(accepts(&p, &num(15), &num(5)));
        assert!(!accepts(&p, &num(16), &num(16)));
        assert!(accepts(&p, &num(1 << 20), &num(7)));
    }

    #[test]
    fn add_const_verifiers() {
        let succ = add_const_verifier("succ", 1);
        let add2 = add_const_verifier("add2", 2);
        for w in 0..6usize {
            for xv in 0..1u64 << w {
                let x = BitString::from_num_width(xv, w);
                for y in BitString::all_of_length(w) {
                    let yv = y.value().unwrap();
                    let m = 1u64 << w;
                    assert_eq!(accepts(&succ, &x, &y), yv == (xv + 1) % m);
                    assert_eq!(accepts(&add2, &x, &y), yv == (xv + 2) % m);
                }
            }
        }
    }

    #[test]
    fn function_programs() {
        let x: BitString = "1101".into();
        let y: BitString = "011".into();
        assert_eq!(run(&identity(), &[&x]).unwrap().output, x);
        assert_eq!(run(&second(), &[&x, &y]).unwrap().output, y);
        assert_eq!(run(&drop_last(), &[&x, &y]).unwrap().output, BitString::from("01"));
        assert_eq!(run(&reverse_pad(), &[&x]).unwrap().output, BitString::from("10111"));
        let v: BitString = "10110".into();
        let u = crate::vm::encode_tuple(&[&v, &BitString::new()]);
        // bound(n) = n + 1 at |x| = 3 gives L = 5
        let p = project_first(PolyBound::new(1, 1, 1));
        assert_eq!(run(&p, &[&BitString::from("000"), &u]).unwrap().output, v);
    }

    #[test]
    fn compiled_verifiers_agree_with_runs() {
        for p in shipped_verifiers() {
            for w0 in 0..=5usize {
                for w1 in 0..=5usize {
                    let c = compile_to_circuit(&p, &[w0, w1], DEFAULT_GATE_CAP).unwrap();
                    for x in BitString::all_of_length(w0) {
                        for y in BitString::all_of_length(w1) {
                            let input: Vec<bool> = x.bits().iter().chain(y.bits()).copied().collect();
                            assert_eq!(c.eval(&input).unwrap()[0], accepts(&p, &x, &y), "{} {x} {y}", p.name);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn compiled_functions_agree_with_runs() {
        let rev = reverse_pad();
        for w in 0..=6usize {
            let c = compile_program(&rev, &[InputSpec::Free(w)], OutputMode::Exact(w + 1), DEFAULT_GATE_CAP).unwrap();
            let cp = compile_program(&rev, &[InputSpec::Free(w)], OutputMode::Pad(w + 3), DEFAULT_GATE_CAP).unwrap();
            for x in BitString::all_of_length(w) {
                let out = run(&rev, &[&x]).unwrap().output;
                assert_eq!(c.circuit.eval(x.bits()).unwrap(), out.bits());
                let mut padded = out.bits().to_vec();
                padded.extend([true, false]);
                assert_eq!(cp.circuit.eval(x.bits()).unwrap(), padded);
            }
        }
        let fixed: BitString = "101".into();
        let c = compile_program(
            &second(),
            &[InputSpec::Fixed(fixed), InputSpec::Free(4)],
            OutputMode::Exact(4),
            DEFAULT_GATE_CAP,
        )
        .unwrap();
        for y in BitString::all_of_length(4) {
            assert_eq!(c.circuit.eval(y.bits()).unwrap(), y.bits());
        }
    }

    #[test]
    fn oblivious_programs_compile_small() {
        let c = compile_program(&factoring_verifier(), &[InputSpec::Free(8), InputSpec::Free(4)], OutputMode::Accept, DEFAULT_GATE_CAP)
            .unwrap();
        assert!(c.circuit.size() < 100_000, "{} gates", c.circuit.size());
    }
}
