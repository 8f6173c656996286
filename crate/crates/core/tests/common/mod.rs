//! Independent reference implementation used by the integration tests.
//!
//! Representations are found by solving the Wirtinger presentation of the
//! closed braid diagram directly: arcs are built by walking the word, the
//! closure glues top arcs to bottom arcs through union-find, and a
//! backtracking search assigns group elements to arcs subject to one
//! conjugation relation per crossing. Nothing here calls the braid group
//! action or the enumeration code of the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

use periodic_dw::group::{Elem, FiniteGroup};
use rand::Rng;

/// One crossing: the under strand enters on `under_in`, leaves on
/// `under_out = over^sign * under_in * over^-sign`.
#[derive(Debug, Clone, Copy)]
struct Crossing {
    over: usize,
    under_in: usize,
    under_out: usize,
    sign: i64,
    over_strand: usize,
    under_strand: usize,
}

#[derive(Debug, Clone)]
pub struct Diagram {
    pub strands: usize,
    arcs: usize,
    crossings: Vec<Crossing>,
    /// Arc class at the bottom of each position.
    bottom: Vec<usize>,
    /// Top position reached by the strand starting at each bottom position.
    exit: Vec<usize>,
    /// Components as cycles of bottom positions, each starting at its minimum.
    pub components: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Parses `"m: l1 l2 ..."` without the library parser.
pub fn parse_word(text: &str) -> (usize, Vec<i64>) {
    let (m, rest) = text.split_once(':').expect("m: letters");
    let m: usize = m.trim().parse().expect("strand count");
    let letters = rest.split_whitespace().map(|t| t.parse().expect("letter")).collect();
    (m, letters)
}

pub fn format_word(m: usize, letters: &[i64]) -> String {
    let body: Vec<String> = letters.iter().map(|l| l.to_string()).collect();
    format!("{m}: {}", body.join(" ")).trim_end().to_string()
}

impl Diagram {
    pub fn new(m: usize, letters: &[i64]) -> Self {
        let mut pos_arc: Vec<usize> = (0..m).collect();
        let mut pos_strand: Vec<usize> = (0..m).collect();
        let mut next = m;
        let mut raw = Vec::new();
        for &l in letters {
            let i = l.unsigned_abs() as usize;
            assert!(i >= 1 && i < m, "letter {l} out of range for {m} strands");
            let (left, right) = (i - 1, i);
            let sign = l.signum();
            // Positive: the left strand is over and the under strand moves left.
            let (over_pos, under_pos) = if sign > 0 { (left, right) } else { (right, left) };
            let c = Crossing {
                over: pos_arc[over_pos],
                under_in: pos_arc[under_pos],
                under_out: next,
                sign,
                over_strand: pos_strand[over_pos],
                under_strand: pos_strand[under_pos],
            };
            next += 1;
            raw.push(c);
            // The two strands trade places.
            pos_arc[over_pos] = c.under_out;
            pos_strand[over_pos] = c.under_strand;
            pos_arc[under_pos] = c.over;
            pos_strand[under_pos] = c.over_strand;
        }
        let mut exit = vec![0; m];
        for (top, &s) in pos_strand.iter().enumerate() {
            exit[s] = top;
        }

        let mut parent: Vec<usize> = (0..next).collect();
        for (j, &arc) in pos_arc.iter().enumerate() {
            let (a, b) = (find(&mut parent, arc), find(&mut parent, j));
            let (lo, hi) = (a.min(b), a.max(b));
            parent[hi] = lo;
        }
        let mut class = vec![usize::MAX; next];
        let mut arcs = 0;
        for a in 0..next {
            let r = find(&mut parent, a);
            if class[r] == usize::MAX {
                class[r] = arcs;
                arcs += 1;
            }
            class[a] = class[r];
        }
        let crossings = raw
            .into_iter()
            .map(|c| Crossing {
                over: class[c.over],
                under_in: class[c.under_in],
                under_out: class[c.under_out],
                ..c
            })
            .collect();
        let bottom = (0..m).map(|j| class[j]).collect();

        let mut seen = vec![false; m];
        let mut components = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![];
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j);
                j = exit[j];
            }
            components.push(cycle);
        }
        Diagram {
            strands: m,
            arcs,
            crossings,
            bottom,
            exit,
            components,
        }
    }

    pub fn parse(text: &str) -> Self {
        let (m, letters) = parse_word(text);
        Self::new(m, &letters)
    }

    fn component_of(&self, strand: usize) -> usize {
        self.components.iter().position(|c| c.contains(&strand)).unwrap()
    }

    pub fn self_writhe(&self, t: usize) -> i64 {
        self.crossings
            .iter()
            .filter(|c| self.component_of(c.over_strand) == t && self.component_of(c.under_strand) == t)
            .map(|c| c.sign)
            .sum()
    }

    pub fn linking(&self, s: usize, t: usize) -> i64 {
        let twice: i64 = self
            .crossings
            .iter()
            .filter(|c| {
                let (a, b) = (self.component_of(c.over_strand), self.component_of(c.under_strand));
                (a, b) == (s, t) || (a, b) == (t, s)
            })
            .map(|c| c.sign)
            .sum();
        twice / 2
    }

    /// Every assignment of group elements to arcs satisfying all crossing
    /// relations, in lexicographic order of arc values.
    pub fn colorings(&self, g: &FiniteGroup) -> Vec<Vec<Elem>> {
        // Relations become checkable once their largest arc is assigned.
        let mut due: Vec<Vec<usize>> = vec![vec![]; self.arcs];
        for (n, c) in self.crossings.iter().enumerate() {
            due[c.over.max(c.under_in).max(c.under_out)].push(n);
        }
        let mut out = Vec::new();
        let mut val = vec![0 as Elem; self.arcs];
        self.search(g, &due, 0, &mut val, &mut out);
        out
    }

    fn search(&self, g: &FiniteGroup, due: &[Vec<usize>], arc: usize, val: &mut [Elem], out: &mut Vec<Vec<Elem>>) {
        if arc == self.arcs {
            out.push(val.to_vec());
            return;
        }
        'values: for v in 0..g.order() as Elem {
            val[arc] = v;
            for &n in &due[arc] {
                let c = self.crossings[n];
                let o = if c.sign > 0 { val[c.over] } else { g.inv(val[c.over]) };
                let expect = g.mul(g.mul(o, val[c.under_in]), g.inv(o));
                if expect != val[c.under_out] {
                    continue 'values;
                }
            }
            self.search(g, due, arc + 1, val, out);
        }
    }

    /// Meridian and 0-framed longitude of each component for one coloring.
    ///
    /// Walking a component upward, each underpass conjugates the current
    /// label by `over^sign`; the product of these factors, newest on the
    /// left, returns the basepoint label to itself and so commutes with it.
    pub fn peripheral(&self, g: &FiniteGroup, coloring: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        let mut meridians = vec![];
        let mut longitudes = vec![];
        for (t, cycle) in self.components.iter().enumerate() {
            let x = coloring[self.bottom[cycle[0]]];
            let mut w = g.identity();
            for &strand in cycle {
                for c in self.crossings.iter().filter(|c| c.under_strand == strand) {
                    let o = coloring[c.over];
                    let f = if c.sign > 0 { o } else { g.inv(o) };
                    w = g.mul(f, w);
                }
            }
            let framing = power(g, x, -self.self_writhe(t));
            meridians.push(x);
            longitudes.push(g.mul(w, framing));
        }
        (meridians, longitudes)
    }

    pub fn hom_count(&self, g: &FiniteGroup) -> usize {
        self.colorings(g).len()
    }

    /// Exact counts keyed by (meridians, longitudes) over all meridian tuples.
    pub fn dw_exact(&self, g: &FiniteGroup) -> BTreeMap<(Vec<Elem>, Vec<Elem>), u64> {
        let mut table = BTreeMap::new();
        for col in self.colorings(g) {
            *table.entry(self.peripheral(g, &col)).or_insert(0) += 1;
        }
        table
    }
}

/// `x^n` by repeated multiplication.
pub fn power(g: &FiniteGroup, x: Elem, n: i64) -> Elem {
    let base = if n < 0 { g.inv(x) } else { x };
    (0..n.unsigned_abs()).fold(g.identity(), |acc, _| g.mul(acc, base))
}

/// Smallest element conjugate to `h` by something commuting with `x`.
pub fn centralizer_class_min(g: &FiniteGroup, x: Elem, h: Elem) -> Elem {
    (0..g.order() as Elem)
        .filter(|&c| g.mul(c, x) == g.mul(x, c))
        .map(|c| g.mul(g.mul(c, h), g.inv(c)))
        .min()
        .unwrap()
}

/// Class-level table: longitude keyed by its class in each centralizer.
pub fn dw_classes(
    g: &FiniteGroup,
    exact: &BTreeMap<(Vec<Elem>, Vec<Elem>), u64>,
) -> BTreeMap<(Vec<Elem>, Vec<Elem>), u64> {
    let mut out = BTreeMap::new();
    for ((x, h), n) in exact {
        let hc = x.iter().zip(h).map(|(&x, &h)| centralizer_class_min(g, x, h)).collect();
        *out.entry((x.clone(), hc)).or_insert(0) += n;
    }
    out
}

/// Built-in groups of order at most `n`, by spec string.
pub fn small_groups(n: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=n).map(|k| format!("cyclic:{k}")).collect();
    for k in 2..=n / 2 {
        v.push(format!("dihedral:{k}"));
    }
    if n >= 6 {
        v.push("symmetric:3".into());
    }
    if n >= 8 {
        v.push("quaternion:8".into());
    }
    v
}

/// Random word with `m` strands and `len` letters.
pub fn random_word(rng: &mut impl Rng, m: usize, len: usize) -> (usize, Vec<i64>) {
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..m as i64);
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    (m, letters)
}

/// Every word with at most `max_len` letters on `m` strands.
pub fn all_words(m: usize, max_len: usize) -> Vec<Vec<i64>> {
    let alphabet: Vec<i64> = (1..m as i64).flat_map(|i| [i, -i]).collect();
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<i64>| {
                alphabet.iter().map(move |&l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
