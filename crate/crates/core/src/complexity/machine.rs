//! The fixed description machine.
//!
//! A program is any bit string:
//!
//! * empty: halts at once with empty output, 0 steps;
//! * first bit `1` (literal mode): prints the remaining bits; the run takes
//!   as many steps as the program has bits;
//! * first bit `0` (VM mode): the remaining bits are read as 3-bit opcodes,
//!   a trailing 1–2 bits are ignored.
//!
//! | code | op    | effect                                         |
//! |------|-------|------------------------------------------------|
//! | 000  | OUT0  | print 0                                        |
//! | 001  | OUT1  | print 1                                        |
//! | 010  | INC   | A += 1                                         |
//! | 011  | DEC   | A -= 1, floored at 0                           |
//! | 100  | WHILE | if A = 0 jump past the matching ENDW           |
//! | 101  | ENDW  | jump back to the matching WHILE                |
//! | 110  | SWAP  | exchange A and B                               |
//! | 111  | HALT  | stop                                           |
//!
//! Registers start at 0. Each executed opcode is one step; running past
//! the last opcode halts. Unmatched brackets make the program invalid,
//! which counts as not halting. This table is a format: changing it changes
//! every stored complexity value.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Out0,
    Out1,
    Inc,
    Dec,
    While,
    EndW,
    Swap,
    Halt,
}

impl Op {
    #[inline]
    pub fn decode(code: u8) -> Op {
        match code & 0b111 {
            0b000 => Op::Out0,
            0b001 => Op::Out1,
            0b010 => Op::Inc,
            0b011 => Op::Dec,
            0b100 => Op::While,
            0b101 => Op::EndW,
            0b110 => Op::Swap,
            _ => Op::Halt,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Program {
    bits: Vec<bool>,
}

impl Program {
    pub fn new(bits: Vec<bool>) -> Self {
        Program { bits }
    }

    /// Parse an ASCII `0`/`1` string; whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(Program::new(bits_from_str(s)?))
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// The literal-mode program printing `x`.
    pub fn literal(x: &[bool]) -> Self {
        let mut bits = Vec::with_capacity(x.len() + 1);
        bits.push(true);
        bits.extend_from_slice(x);
        Program { bits }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_string(&self.bits))
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Program({self})")
    }
}

pub fn bits_from_str(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("expected 0/1, found {other:?}"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub halted: bool,
    pub output: Vec<bool>,
    pub steps: u64,
}

/// What to do with output bits as they are produced.
pub(crate) trait Sink {
    /// Returns `false` to abort the run.
    fn emit(&mut self, bit: bool) -> bool;
    fn len(&self) -> usize;
}

impl Sink for Vec<bool> {
    #[inline]
    fn emit(&mut self, bit: bool) -> bool {
        self.push(bit);
        true
    }

    fn len(&self) -> usize {
        Vec::len(self)
    }
}

/// Compares against a target and aborts at the first mismatch.
pub(crate) struct Expect<'a> {
    pub target: &'a [bool],
    pub pos: usize,
}

impl Sink for Expect<'_> {
    #[inline]
    fn emit(&mut self, bit: bool) -> bool {
        if self.target.get(self.pos) == Some(&bit) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn len(&self) -> usize {
        self.pos
    }
}

/// Collects output but gives up once it exceeds a length cap.
pub(crate) struct Capped {
    pub out: Vec<bool>,
    pub cap: usize,
}

impl Sink for Capped {
    #[inline]
    fn emit(&mut self, bit: bool) -> bool {
        if self.out.len() == self.cap {
            return false;
        }
        self.out.push(bit);
        true
    }

    fn len(&self) -> usize {
        self.out.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum VmExit {
    Halted(u64),
    /// Budget exhausted or provably looping forever.
    Running,
    /// The sink refused an output bit.
    Aborted,
}

/// Reusable decoder/interpreter state for VM-mode bodies.
#[derive(Default)]
pub(crate) struct Vm {
    ops: Vec<Op>,
    partner: Vec<usize>,
    stack: Vec<usize>,
    seen: Vec<Option<(u64, u64, usize)>>,
}

impl Vm {
    pub(crate) fn new() -> Self {
        Vm::default()
    }

    /// Load `k` opcodes packed MSB-first in `code`. Returns `false` when
    /// brackets are unmatched.
    pub(crate) fn load_code(&mut self, code: u64, k: usize) -> bool {
        self.ops.clear();
        for i in (0..k).rev() {
            self.ops.push(Op::decode((code >> (3 * i)) as u8));
        }
        self.match_brackets()
    }

    pub(crate) fn load_bits(&mut self, body: &[bool]) -> bool {
        self.ops.clear();
        for c in body.chunks_exact(3) {
            self.ops.push(Op::decode(
                (u8::from(c[0]) << 2) | (u8::from(c[1]) << 1) | u8::from(c[2]),
            ));
        }
        self.match_brackets()
    }

    fn match_brackets(&mut self) -> bool {
        self.partner.clear();
        self.partner.resize(self.ops.len(), usize::MAX);
        self.stack.clear();
        for (i, op) in self.ops.iter().enumerate() {
            match op {
                Op::While => self.stack.push(i),
                Op::EndW => match self.stack.pop() {
                    Some(open) => {
                        self.partner[open] = i;
                        self.partner[i] = open;
                    }
                    None => return false,
                },
                _ => {}
            }
        }
        self.stack.is_empty()
    }

    /// Execute the loaded body. A loop that returns to the same `ENDW` with
    /// unchanged registers and no new output can never halt, so the run is
    /// cut short with the verdict it would reach at the budget.
    pub(crate) fn run<S: Sink>(&mut self, budget: u64, sink: &mut S) -> VmExit {
        let ops = &self.ops;
        let partner = &self.partner;
        self.seen.clear();
        self.seen.resize(ops.len(), None);
        let (mut a, mut b) = (0u64, 0u64);
        let mut pc = 0usize;
        let mut steps = 0u64;
        while pc < ops.len() {
            if steps == budget {
                return VmExit::Running;
            }
            steps += 1;
            match ops[pc] {
                Op::Out0 => {
                    if !sink.emit(false) {
                        return VmExit::Aborted;
                    }
                }
                Op::Out1 => {
                    if !sink.emit(true) {
                        return VmExit::Aborted;
                    }
                }
                Op::Inc => a = a.saturating_add(1),
                Op::Dec => a = a.saturating_sub(1),
                Op::While => {
                    if a == 0 {
                        pc = partner[pc] + 1;
                        continue;
                    }
                }
                Op::EndW => {
                    let state = (a, b, sink.len());
                    if self.seen[pc] == Some(state) {
                        return VmExit::Running;
                    }
                    self.seen[pc] = Some(state);
                    pc = partner[pc];
                    continue;
                }
                Op::Swap => std::mem::swap(&mut a, &mut b),
                Op::Halt => return VmExit::Halted(steps),
            }
            pc += 1;
        }
        VmExit::Halted(steps)
    }
}

/// Run `p` for at most `budget` steps.
pub fn run_program(p: &Program, budget: u64) -> RunOutcome {
    let bits = p.bits();
    let Some((&mode, body)) = bits.split_first() else {
        return RunOutcome {
            halted: true,
            output: Vec::new(),
            steps: 0,
        };
    };
    if mode {
        let len = bits.len() as u64;
        if len <= budget {
            return RunOutcome {
                halted: true,
                output: body.to_vec(),
                steps: len,
            };
        }
        // the first step reads the mode bit, each further step prints one bit
        let printed = (budget as usize).saturating_sub(1);
        return RunOutcome {
            halted: false,
            output: body[..printed].to_vec(),
            steps: budget,
        };
    }
    let mut vm = Vm::new();
    if !vm.load_bits(body) {
        return RunOutcome {
            halted: false,
            output: Vec::new(),
            steps: budget,
        };
    }
    let mut out = Vec::new();
    match vm.run(budget, &mut out) {
        VmExit::Halted(steps) => RunOutcome {
            halted: true,
            output: out,
            steps,
        },
        // a detected cycle prints nothing more, so the output is final
        VmExit::Running | VmExit::Aborted => RunOutcome {
            halted: false,
            output: out,
            steps: budget,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &str, budget: u64) -> RunOutcome {
        run_program(&Program::parse(s).unwrap(), budget)
    }

    #[test]
    fn empty_program() {
        assert_eq!(
            run("", 0),
            RunOutcome {
                halted: true,
                output: vec![],
                steps: 0
            }
        );
    }

    #[test]
    fn literal_mode() {
        let o = run("10110", 10);
        assert!(o.halted);
        assert_eq!(bits_to_string(&o.output), "0110");
        assert_eq!(o.steps, 5);
        let cut = run("10110", 3);
        assert!(!cut.halted);
        assert_eq!(cut.steps, 3);
        assert_eq!(bits_to_string(&cut.output), "01");
    }

    #[test]
    fn vm_two_out1_then_halt() {
        let o = run("0 001 001 111", 100);
        assert!(o.halted);
        assert_eq!(bits_to_string(&o.output), "11");
        assert_eq!(o.steps, 3);
    }

    #[test]
    fn trailing_bits_ignored_and_falling_off_halts() {
        assert_eq!(run("0 001 1", 10), run("0 001 0", 10));
        let o = run("0 000 01", 10);
        assert!(o.halted);
        assert_eq!(o.steps, 1);
        assert_eq!(bits_to_string(&o.output), "0");
    }

    #[test]
    fn loops() {
        // INC INC WHILE OUT1 DEC ENDW: prints 11
        let o = run("0 010 010 100 001 011 101", 100);
        assert!(o.halted);
        assert_eq!(bits_to_string(&o.output), "11");
        assert_eq!(o.steps, 2 + 2 * 4 + 1);
        // WHILE with A = 0 skips the body
        let o = run("0 100 001 101 000", 100);
        assert_eq!(bits_to_string(&o.output), "0");
        assert_eq!(o.steps, 2);
    }

    #[test]
    fn unmatched_brackets_do_not_halt() {
        for p in ["0 100", "0 101", "0 100 100 101"] {
            let o = run(p, 17);
            assert!(!o.halted);
            assert_eq!(o.steps, 17);
            assert!(o.output.is_empty());
        }
    }

    #[test]
    fn silent_infinite_loop_reports_budget() {
        // INC WHILE ENDW spins forever without output
        let o = run("0 010 100 101", 1000);
        assert!(!o.halted);
        assert_eq!(o.steps, 1000);
        // INC WHILE OUT0 ENDW prints until the budget runs out
        let o = run("0 010 100 000 101", 9);
        assert!(!o.halted);
        assert_eq!(o.output.len(), 3);
    }

    #[test]
    fn budget_counts_halt_step() {
        assert!(!run("0 001 001 111", 2).halted);
        assert!(run("0 001 001 111", 3).halted);
    }
}
