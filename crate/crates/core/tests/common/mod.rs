//! Brute-force oracles shared by the integration and acceptance suites.
//! They are written against the documented behavior, not the library's
//! internals, and favor obviousness over speed.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use symdyn::deepshift::{BlockStore, StandardBlockFamily};
use symdyn::{Alphabet, Canvas, Pattern, ShiftSpec};

/// Run a program on the description machine by direct interpretation.
/// Returns the output if it halts within `budget` steps.
pub fn naive_run(program: &[bool], budget: u64) -> Option<Vec<bool>> {
    let Some((&mode, body)) = program.split_first() else {
        return Some(Vec::new());
    };
    if mode {
        return (program.len() as u64 <= budget).then(|| body.to_vec());
    }
    let ops: Vec<u8> = body
        .chunks_exact(3)
        .map(|c| (c[0] as u8) << 2 | (c[1] as u8) << 1 | c[2] as u8)
        .collect();
    // bracket partners by scanning
    let mut partner = vec![usize::MAX; ops.len()];
    for i in 0..ops.len() {
        if ops[i] == 0b100 {
            let mut depth = 0i32;
            let mut j = i;
            loop {
                match ops[j] {
                    0b100 => depth += 1,
                    0b101 => depth -= 1,
                    _ => {}
                }
                if depth == 0 {
                    break;
                }
                j += 1;
                if j == ops.len() {
                    return None;
                }
            }
            partner[i] = j;
            partner[j] = i;
        }
    }
    if ops.iter().zip(&partner).any(|(&o, &p)| o == 0b101 && p == usize::MAX) {
        return None;
    }
    let (mut a, mut b) = (0u64, 0u64);
    let mut out = Vec::new();
    let mut pc = 0;
    let mut steps = 0;
    while pc < ops.len() {
        if steps == budget {
            return None;
        }
        steps += 1;
        match ops[pc] {
            0b000 => out.push(false),
            0b001 => out.push(true),
            0b010 => a += 1,
            0b011 => a = a.saturating_sub(1),
            0b100 if a == 0 => {
                pc = partner[pc] + 1;
                continue;
            }
            0b100 => {}
            0b101 => {
                pc = partner[pc];
                continue;
            }
            0b110 => std::mem::swap(&mut a, &mut b),
            _ => return Some(out),
        }
        pc += 1;
    }
    Some(out)
}

/// Shortest program length for every output some program of length
/// `<= max_len` prints within `budget`.
pub fn complexity_table(max_len: usize, budget: u64) -> HashMap<Vec<bool>, usize> {
    let mut table = HashMap::new();
    for len in 0..=max_len {
        for code in 0u64..1 << len {
            let program: Vec<bool> = (0..len).rev().map(|k| (code >> k) & 1 == 1).collect();
            if let Some(out) = naive_run(&program, budget) {
                table.entry(out).or_insert(len);
            }
        }
    }
    table
}

pub fn bit_strings(len: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << len).map(move |code| (0..len).rev().map(|k| (code >> k) & 1 == 1).collect())
}

/// Whether any enumerated forbidden pattern embeds in `p`, by trying every
/// translate.
pub fn brute_forbidden(p: &Pattern, spec: &dyn ShiftSpec) -> bool {
    let extent = p.width().max(p.height());
    spec.enumerate_forbidden(extent).iter().any(|f| {
        (0..=p.height().saturating_sub(f.height())).any(|dy| {
            (0..=p.width().saturating_sub(f.width())).any(|dx| {
                f.support().all(|(c, l)| {
                    let x = c.x - f.origin().x + dx as i64;
                    let y = c.y - f.origin().y + dy as i64;
                    p.canvas().get_signed(x, y) == Some(l)
                })
            })
        })
    })
}

/// The `2N × 2N` array of level blocks with the given ids.
pub fn block_array(fam: &StandardBlockFamily, level: usize, ids: [usize; 4]) -> Canvas {
    let n = fam.side(level);
    let mut c = Canvas::empty(2 * n, 2 * n);
    for (q, &id) in ids.iter().enumerate() {
        c.blit(fam.block(level, id).canvas(), (q % 2) * n, (q / 2) * n);
    }
    c
}

fn occurs_in(p: &Pattern, host: &Canvas) -> bool {
    if p.width() > host.width || p.height() > host.height {
        return false;
    }
    (0..=host.height - p.height()).any(|oy| {
        (0..=host.width - p.width())
            .any(|ox| (0..p.height()).all(|y| (0..p.width()).all(|x| p.get(x, y) == host.get(ox + x, oy + y))))
    })
}

/// Occurrence of `p` in any 2×2 array of same-level blocks, at every level
/// whose blocks are at least as wide as `p`.
pub fn brute_member(p: &Pattern, fam: &StandardBlockFamily) -> bool {
    (0..=fam.depth())
        .filter(|&i| fam.side(i) >= p.width().max(p.height()))
        .any(|i| {
            let b = fam.block_count(i);
            (0..b.pow(4)).any(|code| {
                let ids = [code % b, code / b % b, code / (b * b) % b, code / (b * b * b) % b];
                occurs_in(p, &block_array(fam, i, ids))
            })
        })
}

/// A `w × h` window of a random block array at a random offset.
pub fn random_window(rng: &mut ChaCha8Rng, fam: &StandardBlockFamily, level: usize, w: usize, h: usize) -> Pattern {
    let b = fam.block_count(level);
    let ids = [
        rng.gen_range(0..b),
        rng.gen_range(0..b),
        rng.gen_range(0..b),
        rng.gen_range(0..b),
    ];
    let host = block_array(fam, level, ids);
    let ox = rng.gen_range(0..=host.width - w);
    let oy = rng.gen_range(0..=host.height - h);
    let mut c = Canvas::empty(w, h);
    for y in 0..h {
        for x in 0..w {
            c.set(x, y, host.get(ox + x, oy + y));
        }
    }
    Pattern::from_canvas(&Alphabet::binary(), c)
}

pub fn random_binary(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Pattern {
    let letters: Vec<u8> = (0..w * h).map(|_| rng.gen_range(0..2)).collect();
    Pattern::from_letters(&Alphabet::binary(), w, h, letters).unwrap()
}

pub fn flip_one(rng: &mut ChaCha8Rng, p: &Pattern) -> Pattern {
    let mut c = p.canvas().clone();
    let (x, y) = (rng.gen_range(0..p.width()), rng.gen_range(0..p.height()));
    c.set(x, y, c.get(x, y).map(|l| 1 - l));
    Pattern::from_canvas(p.alphabet(), c)
}

/// Random hard-square configuration: each cell is 1 with probability 1/2
/// unless its upper or left neighbor is 1.
pub fn random_hard_square(rng: &mut ChaCha8Rng, side: usize) -> Pattern {
    let mut cells = vec![0u8; side * side];
    for y in 0..side {
        for x in 0..side {
            let up = y > 0 && cells[(y - 1) * side + x] == 1;
            let left = x > 0 && cells[y * side + x - 1] == 1;
            if !up && !left && rng.gen_bool(0.5) {
                cells[y * side + x] = 1;
            }
        }
    }
    Pattern::from_letters(&Alphabet::binary(), side, side, cells).unwrap()
}

/// A block store exposing only sides; any content read panics.
pub struct SidesOnly(pub Vec<usize>);

impl BlockStore for SidesOnly {
    fn side(&self, level: usize) -> usize {
        self.0[level]
    }

    fn block_count(&self, _: usize) -> usize {
        panic!("block count read")
    }

    fn block(&self, level: usize, j: usize) -> &Pattern {
        panic!("stored cell read: Q_{level}^{j}")
    }
}
