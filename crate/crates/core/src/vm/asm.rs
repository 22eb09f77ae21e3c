//! Line-based assembly for [`VerifierProgram`].
//!
//! ```text
//! .name equality        ; program name
//! .arity 2              ; number of inputs
//! .regs 4               ; register count
//! .budget 4 1 16        ; step budget c·n^k + d
//! .oracle 1 1 0 1 1 1   ; optional: query width, then answer width
//! loop:
//!     bit r1 0 r0       ; r1 = input0[r0]
//!     jz r1 done
//!     accept
//! ```
//!
//! Registers are written `r0, r1, …`; inputs by index; jump targets by label.
//! `;` and `#` start comments.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::bound::PolyBound;
use super::program::{BinOp, Instr, OracleSpec, Reg, VerifierProgram};
use super::VmError;

fn err(line: usize, msg: impl Into<String>) -> VmError {
    VmError::Asm { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, VmError> {
    tok.parse().map_err(|_| err(line, format!("bad number `{tok}`")))
}

fn parse_imm(tok: &str, line: usize) -> Result<u32, VmError> {
    match tok.strip_prefix("0x") {
        Some(hex) => u32::from_str_radix(hex, 16).map_err(|_| err(line, format!("bad immediate `{tok}`"))),
        None => parse_num(tok, line),
    }
}

fn parse_reg(tok: &str, line: usize) -> Result<Reg, VmError> {
    tok.strip_prefix('r')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| err(line, format!("expected register, found `{tok}`")))
}

fn parse_bound(toks: &[&str], line: usize) -> Result<PolyBound, VmError> {
    if toks.len() != 3 {
        return Err(err(line, "a bound is written `c k d`"));
    }
    Ok(PolyBound::new(parse_num(toks[0], line)?, parse_num(toks[1], line)?, parse_num(toks[2], line)?))
}

pub fn parse_program(text: &str) -> Result<VerifierProgram, VmError> {
    let mut name = None;
    let mut arity = None;
    let mut regs = None;
    let mut budget = None;
    let mut oracle = None;
    let mut labels: HashMap<String, usize> = HashMap::new();
    // (line number, tokens) of each instruction
    let mut body: Vec<(usize, Vec<String>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let code = raw.split([';', '#']).next().unwrap_or("").trim();
        if code.is_empty() {
            continue;
        }
        let toks: Vec<&str> = code.split_whitespace().collect();
        if let Some(directive) = toks[0].strip_prefix('.') {
            let args = &toks[1..];
            match directive {
                "name" if args.len() == 1 => name = Some(args[0].to_string()),
                "arity" if args.len() == 1 => arity = Some(parse_num(args[0], line)?),
                "regs" if args.len() == 1 => regs = Some(parse_num(args[0], line)?),
                "budget" => budget = Some(parse_bound(args, line)?),
                "oracle" if args.len() == 6 => {
                    oracle = Some(OracleSpec {
                        query_width: parse_bound(&args[..3], line)?,
                        answer_width: parse_bound(&args[3..], line)?,
                    })
                }
                _ => return Err(err(line, format!("bad directive `{code}`"))),
            }
            continue;
        }
        if let Some(label) = toks[0].strip_suffix(':') {
            if toks.len() != 1 || label.is_empty() {
                return Err(err(line, "a label stands alone on its line"));
            }
            if labels.insert(label.to_string(), body.len()).is_some() {
                return Err(err(line, format!("duplicate label `{label}`")));
            }
            continue;
        }
        body.push((line, toks.iter().map(|t| t.to_string()).collect()));
    }
    let target = |tok: &str, line: usize| -> Result<usize, VmError> {
        labels.get(tok).copied().ok_or_else(|| err(line, format!("unknown label `{tok}`")))
    };
    let mut code = Vec::with_capacity(body.len());
    for (line, toks) in &body {
        let line = *line;
        let t: Vec<&str> = toks.iter().map(String::as_str).collect();
        let want = |k: usize| {
            if t.len() == k + 1 {
                Ok(())
            } else {
                Err(err(line, format!("`{}` takes {k} operands", t[0])))
            }
        };
        let ins = match t[0] {
            "const" => want(2).and_then(|_| Ok(Instr::Const(parse_reg(t[1], line)?, parse_imm(t[2], line)?)))?,
            "mov" => want(2).and_then(|_| Ok(Instr::Mov(parse_reg(t[1], line)?, parse_reg(t[2], line)?)))?,
            "len" => want(2).and_then(|_| Ok(Instr::Len(parse_reg(t[1], line)?, parse_num(t[2], line)?)))?,
            "bit" => want(3).and_then(|_| {
                Ok(Instr::Bit(parse_reg(t[1], line)?, parse_num(t[2], line)?, parse_reg(t[3], line)?))
            })?,
            "jmp" => want(1).and_then(|_| Ok(Instr::Jmp(target(t[1], line)?)))?,
            "jz" => want(2).and_then(|_| Ok(Instr::Jz(parse_reg(t[1], line)?, target(t[2], line)?)))?,
            "jnz" => want(2).and_then(|_| Ok(Instr::Jnz(parse_reg(t[1], line)?, target(t[2], line)?)))?,
            "out" => want(1).and_then(|_| Ok(Instr::Out(parse_reg(t[1], line)?)))?,
            "push" => want(1).and_then(|_| Ok(Instr::Push(parse_reg(t[1], line)?)))?,
            "ask" => want(0).map(|_| Instr::Ask)?,
            "ans" => want(2).and_then(|_| Ok(Instr::Ans(parse_reg(t[1], line)?, parse_reg(t[2], line)?)))?,
            "accept" => want(0).map(|_| Instr::Accept)?,
            "reject" => want(0).map(|_| Instr::Reject)?,
            m => match BinOp::ALL.iter().find(|op| op.mnemonic() == m) {
                Some(&op) => want(3).and_then(|_| {
                    Ok(Instr::Bin(op, parse_reg(t[1], line)?, parse_reg(t[2], line)?, parse_reg(t[3], line)?))
                })?,
                None => return Err(err(line, format!("unknown instruction `{m}`"))),
            },
        };
        code.push(ins);
    }
    let missing = |d: &str| err(0, format!("missing .{d} directive"));
    let prog = VerifierProgram {
        name: name.ok_or_else(|| missing("name"))?,
        arity: arity.ok_or_else(|| missing("arity"))?,
        regs: regs.ok_or_else(|| missing("regs"))?,
        budget: budget.ok_or_else(|| missing("budget"))?,
        oracle,
        code,
    };
    prog.validate()?;
    Ok(prog)
}

pub fn print_program(p: &VerifierProgram) -> String {
    let b = |x: &PolyBound| format!("{} {} {}", x.c, x.k, x.d);
    let mut s = format!(".name {}\n.arity {}\n.regs {}\n.budget {}\n", p.name, p.arity, p.regs, b(&p.budget));
    if let Some(o) = &p.oracle {
        let _ = writeln!(s, ".oracle {} {}", b(&o.query_width), b(&o.answer_width));
    }
    let targets: BTreeSet<usize> = p
        .code
        .iter()
        .filter_map(|i| match *i {
            Instr::Jmp(t) | Instr::Jz(_, t) | Instr::Jnz(_, t) => Some(t),
            _ => None,
        })
        .collect();
    for (pc, ins) in p.code.iter().enumerate() {
        if targets.contains(&pc) {
            let _ = writeln!(s, "L{pc}:");
        }
        let text = match *ins {
            Instr::Const(d, v) => format!("const r{d} {v}"),
            Instr::Mov(d, a) => format!("mov r{d} r{a}"),
            Instr::Len(d, k) => format!("len r{d} {k}"),
            Instr::Bit(d, k, i) => format!("bit r{d} {k} r{i}"),
            Instr::Bin(op, d, a, c) => format!("{} r{d} r{a} r{c}", op.mnemonic()),
            Instr::Jmp(t) => format!("jmp L{t}"),
            Instr::Jz(c, t) => format!("jz r{c} L{t}"),
            Instr::Jnz(c, t) => format!("jnz r{c} L{t}"),
            Instr::Out(a) => format!("out r{a}"),
            Instr::Push(a) => format!("push r{a}"),
            Instr::Ask => "ask".to_string(),
            Instr::Ans(d, i) => format!("ans r{d} r{i}"),
            Instr::Accept => "accept".to_string(),
            Instr::Reject => "reject".to_string(),
        };
        let _ = writeln!(s, "    {text}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = "
        .name demo
        .arity 1
        .regs 3
        .budget 4 1 8
        ; count the ones of input 0
        len r0 0
    loop:
        jz r0 done
        const r2 1
        sub r0 r0 r2
        bit r2 0 r0
        add r1 r1 r2
        jmp loop
    done:
        jz r1 no
        accept
    no:
        reject
    ";

    #[test]
    fn parse_print_round_trip() {
        let p = parse_program(SRC).unwrap();
        assert_eq!(p.code.len(), 10);
        assert_eq!(p.code[1], Instr::Jz(0, 7));
        let again = parse_program(&print_program(&p)).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_program(".name x\n.arity 1\n.regs 1\n.budget 1 1 1\nfrob r0\n").unwrap_err();
        assert_eq!(e, VmError::Asm { line: 5, msg: "unknown instruction `frob`".into() });
        assert!(parse_program(".name x\n.arity 1\n.regs 1\n.budget 1 1 1\njmp nowhere\n").is_err());
        assert!(parse_program(".name x\n.arity 1\n.regs 1\n.budget 1 1 1\nconst r5 1\naccept\n").is_err());
    }
}
