//! Finite monoids up to isomorphism and a bounded search for witnesses
//! that a homomorphism is not an epimorphism.

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::ContextError;
use crate::fincat::{monoid_homs, Monoid, MonoidHom};

/// Largest target size the explorer accepts.
pub const MAX_EXPLORER_CAP: usize = 6;

static CATALOG: [OnceLock<Vec<Monoid>>; MAX_EXPLORER_CAP + 1] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// One representative of every isomorphism class of monoids of order `n`
/// (`1 <= n <= 6`), element `0` being the unit. Computed once per process.
pub fn monoids_of_order(n: usize) -> &'static [Monoid] {
    assert!((1..=MAX_EXPLORER_CAP).contains(&n), "monoid order out of range");
    CATALOG[n].get_or_init(|| {
        let mut tables = generate(n);
        tables.sort_unstable();
        tables.dedup();
        let names: Vec<String> = (0..n).map(|i| if i == 0 { "e".into() } else { format!("x{i}") }).collect();
        tables
            .into_iter()
            .map(|t| Monoid::new_unchecked(names.clone(), t.into_iter().map(usize::from).collect(), 0))
            .collect()
    })
}

const UNSET: u8 = u8::MAX;

/// Canonical tables of all monoids of order `n` with unit `0`, with
/// repetitions.
fn generate(n: usize) -> Vec<Vec<u8>> {
    let mut s = Solver {
        n,
        t: vec![UNSET; n * n],
        trail: Vec::new(),
        queue: Vec::new(),
    };
    for x in 0..n {
        s.t[x] = x as u8;
        s.t[x * n] = x as u8;
    }
    let mut out = Vec::new();
    s.search(&mut out);
    out
}

/// Backtracking over the multiplication table with propagation of
/// associativity: once `xy` and `yz` are known, `(xy)z` and `x(yz)` must
/// agree, so a known side forces the other.
struct Solver {
    n: usize,
    t: Vec<u8>,
    trail: Vec<usize>,
    queue: Vec<usize>,
}

impl Solver {
    fn search(&mut self, out: &mut Vec<Vec<u8>>) {
        let Some(cell) = self.t.iter().position(|&v| v == UNSET) else {
            out.push(canonical(&self.t, self.n));
            return;
        };
        for v in 0..self.n as u8 {
            let mark = self.trail.len();
            if self.set(cell, v) && self.propagate() {
                self.search(out);
            }
            self.queue.clear();
            for c in self.trail.drain(mark..) {
                self.t[c] = UNSET;
            }
        }
    }

    fn set(&mut self, cell: usize, v: u8) -> bool {
        match self.t[cell] {
            UNSET => {
                self.t[cell] = v;
                self.trail.push(cell);
                self.queue.push(cell);
                true
            }
            w => w == v,
        }
    }

    /// `(xy)z = x(yz)` given `xy` and `yz`.
    fn equation(&mut self, x: usize, y: usize, z: usize) -> bool {
        let n = self.n;
        let (xy, yz) = (self.t[x * n + y], self.t[y * n + z]);
        if xy == UNSET || yz == UNSET {
            return true;
        }
        let (l, r) = (xy as usize * n + z, x * n + yz as usize);
        match (self.t[l], self.t[r]) {
            (UNSET, UNSET) => true,
            (UNSET, v) => self.set(l, v),
            (v, UNSET) => self.set(r, v),
            (a, b) => a == b,
        }
    }

    fn propagate(&mut self) -> bool {
        let n = self.n;
        while let Some(cell) = self.queue.pop() {
            let (i, j) = (cell / n, cell % n);
            for z in 0..n {
                // cell as xy, and as yz
                if !self.equation(i, j, z) || !self.equation(z, i, j) {
                    return false;
                }
            }
            for x in 0..n {
                for y in 0..n {
                    // cell as (xy)z with xy = i, and as x(yz) with yz = j
                    if (self.t[x * n + y] as usize == i && !self.equation(x, y, j))
                        || (self.t[x * n + y] as usize == j && !self.equation(i, x, y))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Isomorphism invariants of an element, used to restrict relabelings.
fn invariant(t: &[u8], n: usize, x: usize) -> [usize; 5] {
    let get = |a: usize, b: usize| t[a * n + b] as usize;
    let mut powers = vec![x];
    let mut p = get(x, x);
    while !powers.contains(&p) {
        powers.push(p);
        p = get(p, x);
    }
    [
        powers.len(),
        usize::from(get(x, x) == x),
        (0..n).filter(|&y| get(x, y) == x).count(),
        (0..n).filter(|&y| get(y, x) == x).count(),
        (0..n).filter(|&y| get(x, y) == get(y, x)).count(),
    ]
}

/// The lexicographically least relabeling fixing `0` among those that
/// list elements in increasing invariant order.
fn canonical(t: &[u8], n: usize) -> Vec<u8> {
    let inv: Vec<[usize; 5]> = (0..n).map(|x| invariant(t, n, x)).collect();
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by_key(|&x| inv[x]);
    // blocks of equal invariants may be permuted freely
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=order.len() {
        if k == order.len() || inv[order[k]] != inv[order[start]] {
            blocks.push((start, k));
            start = k;
        }
    }
    let mut best: Option<Vec<u8>> = None;
    let mut seq = order.clone();
    permute_blocks(&mut seq, &blocks, 0, &mut |seq| {
        // seq[k] gets label k + 1
        let mut label = vec![0u8; n];
        for (k, &x) in seq.iter().enumerate() {
            label[x] = (k + 1) as u8;
        }
        let mut relabeled = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                relabeled[label[x] as usize * n + label[y] as usize] = label[t[x * n + y] as usize];
            }
        }
        if best.as_ref().is_none_or(|b| relabeled < *b) {
            best = Some(relabeled);
        }
    });
    best.expect("at least one relabeling")
}

fn permute_blocks(seq: &mut Vec<usize>, blocks: &[(usize, usize)], b: usize, visit: &mut dyn FnMut(&[usize])) {
    if b == blocks.len() {
        visit(seq);
        return;
    }
    let (lo, hi) = blocks[b];
    heap_permutations(seq, lo, hi - lo, &mut |seq| permute_blocks(seq, blocks, b + 1, visit));
}

fn heap_permutations(seq: &mut Vec<usize>, lo: usize, k: usize, visit: &mut dyn FnMut(&mut Vec<usize>)) {
    if k <= 1 {
        visit(seq);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(seq, lo, k - 1, visit);
        if k % 2 == 0 {
            seq.swap(lo + i, lo + k - 1);
        } else {
            seq.swap(lo, lo + k - 1);
        }
    }
    heap_permutations(seq, lo, k - 1, visit);
}

/// Result of the bounded epimorphism search. Absence of a counterexample
/// is evidence only up to the cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpiVerdict {
    /// `g . f = h . f` with `g != h`, both homomorphisms into `target`.
    Refuted { target: Monoid, g: Vec<usize>, h: Vec<usize> },
    NoCounterexample { cap: usize, targets_checked: usize },
}

/// Looks for monoids `C` with `|C| <= cap` and distinct homomorphisms
/// `g, h: B -> C` agreeing on the image of `f`.
pub fn monoid_epi_refute(f: &MonoidHom, cap: usize) -> Result<EpiVerdict, ContextError> {
    if cap > MAX_EXPLORER_CAP {
        return Err(ContextError::CapTooLarge(cap));
    }
    let image = f.image();
    let mut checked = 0;
    for n in 1..=cap {
        let catalog = monoids_of_order(n);
        let found = catalog.par_iter().find_map_first(|c| {
            let mut by_restriction: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
            for g in monoid_homs(f.cod(), c) {
                let key: Vec<usize> = image.iter().map(|&b| g[b]).collect();
                if let Some(first) = by_restriction.get(&key) {
                    return Some(EpiVerdict::Refuted {
                        target: c.clone(),
                        g: first.clone(),
                        h: g,
                    });
                }
                by_restriction.insert(key, g);
            }
            None
        });
        if let Some(v) = found {
            return Ok(v);
        }
        checked += catalog.len();
    }
    Ok(EpiVerdict::NoCounterexample {
        cap,
        targets_checked: checked,
    })
}
