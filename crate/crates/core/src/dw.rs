//! Dijkgraaf–Witten counting tables of a closed braid.
//!
//! For meridian images `x = (x_1..x_n)` and longitude images `h` with
//! `h_t ∈ Cen(x_t)`, the exact count is the number of homomorphisms sending
//! the meridian and longitude of each component to `x_t` and `h_t`. The class
//! count relaxes `h_t` to its conjugacy class inside `Cen(x_t)`.
//!
//! Tables are sparse: only nonzero counts are stored.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::braid::BraidWord;
use crate::group::{CentralizerClasses, ConjClass, Elem, FiniteGroup};
use crate::holonomy::{ClosedBraid, EnumOptions, HolonomyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DwError {
    #[error("h_{component} is not in the centralizer of x_{component}")]
    HNotInCentralizer { component: usize },
    #[error("expected {expected} components, got a tuple of length {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Holonomy(#[from] HolonomyError),
}

/// Which meridian tuples a table covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum XScope {
    /// Each `x_t` ranges over conjugacy-class representatives of Γ.
    #[default]
    Representatives,
    /// Each `x_t` ranges over all of Γ.
    All,
}

impl XScope {
    pub fn as_str(self) -> &'static str {
        match self {
            XScope::Representatives => "representatives",
            XScope::All => "all",
        }
    }

    /// Meridian tuples of length `n` in lexicographic order.
    pub fn tuples(self, group: &FiniteGroup, n: usize) -> Vec<Vec<Elem>> {
        let choices: Vec<Elem> = match self {
            XScope::Representatives => group.conjugacy_classes().iter().map(|c| c.representative).collect(),
            XScope::All => group.elements().collect(),
        };
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    choices.iter().map(move |&c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DwKeyExact {
    pub x: Vec<Elem>,
    pub h: Vec<Elem>,
}

/// `hclass[t]` is the smallest element of the class of `h_t` in `Cen(x_t)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DwKeyClass {
    pub x: Vec<Elem>,
    pub hclass: Vec<Elem>,
}

impl DwKeyClass {
    /// The classes themselves, each taken inside `Cen(x_t)`.
    pub fn classes(&self, group: &FiniteGroup) -> Vec<ConjClass> {
        self.x
            .iter()
            .zip(&self.hclass)
            .map(|(&x, &h)| {
                group
                    .class_in_subgroup(group.centralizer(x), h)
                    .expect("class key lies in the centralizer")
            })
            .collect()
    }
}

/// Longitude counts at one meridian tuple.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Column {
    pub exact: BTreeMap<Vec<Elem>, u64>,
    pub classes: BTreeMap<Vec<Elem>, u64>,
    pub homs: u64,
}

/// Per-component class data of the centralizers `Cen(x_t)`.
pub fn centralizer_classes(group: &FiniteGroup, x: &[Elem]) -> Vec<CentralizerClasses> {
    x.iter().map(|&xt| group.centralizer_classes(xt)).collect()
}

fn class_key(cen: &[CentralizerClasses], h: &[Elem]) -> Option<Vec<Elem>> {
    cen.iter().zip(h).map(|(c, &ht)| c.rep_of(ht)).collect()
}

/// Enumerates the homomorphisms with meridian images `x` and tallies their
/// longitudes, exactly and up to conjugacy in the centralizers.
pub fn column(
    closed: &ClosedBraid,
    group: &FiniteGroup,
    x: &[Elem],
    opts: &EnumOptions,
) -> Result<Column, DwError> {
    let n = closed.components().count();
    if x.len() != n {
        return Err(DwError::LengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let cen = centralizer_classes(group, x);
    let mut col = Column::default();
    for rec in closed.enumerate(group, Some(x), opts)? {
        let key = class_key(&cen, &rec.longitude).expect("longitude commutes with meridian");
        *col.classes.entry(key).or_insert(0) += 1;
        *col.exact.entry(rec.longitude).or_insert(0) += 1;
        col.homs += 1;
    }
    Ok(col)
}

pub fn dw_exact(
    beta: &BraidWord,
    group: &FiniteGroup,
    x: &[Elem],
    h: &[Elem],
    opts: &EnumOptions,
) -> Result<u64, DwError> {
    if x.len() != h.len() {
        return Err(DwError::LengthMismatch {
            expected: x.len(),
            got: h.len(),
        });
    }
    if x.iter().zip(h).any(|(&a, &b)| !group.commute(a, b)) {
        return Ok(0);
    }
    let col = column(&ClosedBraid::new(beta.clone()), group, x, opts)?;
    Ok(col.exact.get(h).copied().unwrap_or(0))
}

pub fn dw_class(
    beta: &BraidWord,
    group: &FiniteGroup,
    x: &[Elem],
    h: &[Elem],
    opts: &EnumOptions,
) -> Result<u64, DwError> {
    if x.len() != h.len() {
        return Err(DwError::LengthMismatch {
            expected: x.len(),
            got: h.len(),
        });
    }
    if let Some(t) = (0..x.len()).find(|&t| !group.commute(x[t], h[t])) {
        return Err(DwError::HNotInCentralizer { component: t });
    }
    let col = column(&ClosedBraid::new(beta.clone()), group, x, opts)?;
    let key = class_key(&centralizer_classes(group, x), h).expect("checked above");
    Ok(col.classes.get(&key).copied().unwrap_or(0))
}

#[derive(Debug, Clone)]
pub struct DwTable {
    pub braid: BraidWord,
    pub group: String,
    pub components: usize,
    pub scope: XScope,
    pub exact: BTreeMap<DwKeyExact, u64>,
    pub classes: BTreeMap<DwKeyClass, u64>,
    /// Number of homomorphisms at each meridian tuple in scope.
    pub homs_by_x: BTreeMap<Vec<Elem>, u64>,
}

impl DwTable {
    pub fn exact_count(&self, x: &[Elem], h: &[Elem]) -> u64 {
        let key = DwKeyExact {
            x: x.to_vec(),
            h: h.to_vec(),
        };
        self.exact.get(&key).copied().unwrap_or(0)
    }

    /// Count for a class key given by its canonical representatives.
    pub fn class_count(&self, x: &[Elem], hclass: &[Elem]) -> u64 {
        let key = DwKeyClass {
            x: x.to_vec(),
            hclass: hclass.to_vec(),
        };
        self.classes.get(&key).copied().unwrap_or(0)
    }

    pub fn total_homs(&self) -> u64 {
        self.homs_by_x.values().sum()
    }

    pub fn to_json(&self, group: &FiniteGroup, include_exact: bool, include_classes: bool) -> DwTableJson {
        let names = |v: &[Elem]| v.iter().map(|&e| group.name(e).to_string()).collect();
        DwTableJson {
            braid: self.braid.to_string(),
            group: self.group.clone(),
            components: self.components,
            scope: self.scope.as_str(),
            entries: include_classes.then(|| {
                self.classes
                    .iter()
                    .map(|(k, &count)| ClassEntryJson {
                        x: names(&k.x),
                        h_class_reps: names(&k.hclass),
                        count,
                    })
                    .collect()
            }),
            exact_entries: include_exact.then(|| {
                self.exact
                    .iter()
                    .map(|(k, &count)| ExactEntryJson {
                        x: names(&k.x),
                        h: names(&k.h),
                        count,
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassEntryJson {
    pub x: Vec<String>,
    pub h_class_reps: Vec<String>,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactEntryJson {
    pub x: Vec<String>,
    pub h: Vec<String>,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DwTableJson {
    pub braid: String,
    pub group: String,
    pub components: usize,
    pub scope: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<ClassEntryJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_entries: Option<Vec<ExactEntryJson>>,
}

/// Full sparse table over every meridian tuple in `scope`.
pub fn dw_table(
    beta: &BraidWord,
    group: &FiniteGroup,
    scope: XScope,
    opts: &EnumOptions,
) -> Result<DwTable, DwError> {
    let closed = ClosedBraid::new(beta.clone());
    dw_table_for(&closed, group, &scope.tuples(group, closed.components().count()), scope, opts)
}

/// Table over an explicit list of meridian tuples.
pub fn dw_table_for(
    closed: &ClosedBraid,
    group: &FiniteGroup,
    xs: &[Vec<Elem>],
    scope: XScope,
    opts: &EnumOptions,
) -> Result<DwTable, DwError> {
    let inner = EnumOptions { threads: None, ..*opts };
    let columns: Vec<Result<Column, DwError>> =
        opts.install(|| xs.par_iter().map(|x| column(closed, group, x, &inner)).collect())?;
    let mut table = DwTable {
        braid: closed.braid().clone(),
        group: group.label().to_string(),
        components: closed.components().count(),
        scope,
        exact: BTreeMap::new(),
        classes: BTreeMap::new(),
        homs_by_x: BTreeMap::new(),
    };
    for (x, col) in xs.iter().zip(columns) {
        let col = col?;
        table.homs_by_x.insert(x.clone(), col.homs);
        for (h, c) in col.exact {
            table.exact.insert(DwKeyExact { x: x.clone(), h }, c);
        }
        for (hclass, c) in col.classes {
            table.classes.insert(DwKeyClass { x: x.clone(), hclass }, c);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::count_homs;

    fn b(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    fn opts() -> EnumOptions {
        EnumOptions::default()
    }

    #[test]
    fn unknot_longitude_is_trivial() {
        let g = FiniteGroup::symmetric(3).unwrap();
        for x in g.elements() {
            for h in g.elements() {
                let expected = u64::from(h == g.identity());
                assert_eq!(dw_exact(&b("2: 1"), &g, &[x], &[h], &opts()).unwrap(), expected);
            }
        }
    }

    #[test]
    fn abelian_hopf_formula() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let hopf = b("2: 1 1");
        for x1 in g.elements() {
            for x2 in g.elements() {
                for h1 in g.elements() {
                    for h2 in g.elements() {
                        let expected = u64::from(h1 == x2 && h2 == x1);
                        let got = dw_exact(&hopf, &g, &[x1, x2], &[h1, h2], &opts()).unwrap();
                        assert_eq!(got, expected);
                        assert_eq!(dw_class(&hopf, &g, &[x1, x2], &[h1, h2], &opts()).unwrap(), got);
                    }
                }
            }
        }
    }

    #[test]
    fn unlink_counts() {
        let g = FiniteGroup::quaternion();
        let unlink = b("3:");
        let id = g.identity();
        for h in g.elements() {
            let expected = u64::from(h == id);
            assert_eq!(dw_exact(&unlink, &g, &[2, 3, 5], &[h, id, id], &opts()).unwrap(), expected);
        }
    }

    #[test]
    fn off_centralizer() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let t = g.element_by_name("(1 2)").unwrap();
        let r = g.element_by_name("(1 2 3)").unwrap();
        assert_eq!(dw_exact(&b("2: 1 1 1"), &g, &[t], &[r], &opts()).unwrap(), 0);
        assert_eq!(
            dw_class(&b("2: 1 1 1"), &g, &[t], &[r], &opts()),
            Err(DwError::HNotInCentralizer { component: 0 })
        );
    }

    #[test]
    fn identity_class_is_exact() {
        let g = FiniteGroup::from_spec("dihedral:4").unwrap();
        for beta in ["2: 1 1 1", "3: 1 -2 1 -2", "2: 1 1 1 1"] {
            let beta = b(beta);
            let n = beta.components().count();
            let id = vec![g.identity(); n];
            for x in XScope::All.tuples(&g, n) {
                assert_eq!(
                    dw_class(&beta, &g, &x, &id, &opts()).unwrap(),
                    dw_exact(&beta, &g, &x, &id, &opts()).unwrap()
                );
            }
        }
    }

    #[test]
    fn trefoil_s3_classes_sum_to_constrained_count() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let trefoil = b("2: 1 1 1");
        let t = g.element_by_name("(1 2)").unwrap();
        let cen = g.centralizer_classes(t);
        assert_eq!(cen.classes.len(), 2);
        let sum: u64 = cen
            .reps()
            .map(|h| dw_class(&trefoil, &g, &[t], &[h], &opts()).unwrap())
            .sum();
        assert_eq!(sum, count_homs(&trefoil, &g, Some(&[t]), &opts()).unwrap());
        assert_eq!(sum, 3);
    }

    #[test]
    fn table_shapes() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let t = dw_table(&b("1:"), &z3, XScope::Representatives, &opts()).unwrap();
        assert_eq!(t.exact.len(), 3);
        for x in z3.elements() {
            assert_eq!(t.exact_count(&[x], &[0]), 1);
        }

        let z2 = FiniteGroup::cyclic(2).unwrap();
        let t = dw_table(&b("2: 1 1"), &z2, XScope::Representatives, &opts()).unwrap();
        assert_eq!(t.homs_by_x.len(), 4);
        assert_eq!(t.exact.len(), 4);
        assert!(t.exact.values().all(|&c| c == 1));
        for key in t.exact.keys() {
            assert_eq!(key.h, vec![key.x[1], key.x[0]]);
        }
    }

    #[test]
    fn aggregation_and_column_sums() {
        let groups = [FiniteGroup::symmetric(3).unwrap(), FiniteGroup::quaternion()];
        for g in &groups {
            for beta in ["2: 1 1 1", "2: 1 1", "3: 1 2", "3: 1 -2 1 -2", "3: 1 1 2 2"] {
                let beta = b(beta);
                let table = dw_table(&beta, g, XScope::All, &opts()).unwrap();
                assert_eq!(table.total_homs(), count_homs(&beta, g, None, &opts()).unwrap());
                for (x, &homs) in &table.homs_by_x {
                    let exact_sum: u64 = table.exact.iter().filter(|(k, _)| &k.x == x).map(|(_, c)| c).sum();
                    assert_eq!(exact_sum, homs);
                    assert_eq!(homs, count_homs(&beta, g, Some(x), &opts()).unwrap());
                }
                for (key, &count) in &table.classes {
                    let classes = key.classes(g);
                    let summed: u64 = table
                        .exact
                        .iter()
                        .filter(|(k, _)| k.x == key.x && k.h.iter().zip(&classes).all(|(&h, c)| c.contains(h)))
                        .map(|(_, c)| c)
                        .sum();
                    assert_eq!(summed, count);
                }
                for key in table.exact.keys() {
                    for (x, h) in key.x.iter().zip(&key.h) {
                        assert!(g.commute(*x, *h));
                    }
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let t = dw_table(&b("2: 1 1"), &g, XScope::Representatives, &opts()).unwrap();
        let v = serde_json::to_value(t.to_json(&g, false, true)).unwrap();
        assert_eq!(v["braid"], "2: 1 1");
        assert_eq!(v["group"], "cyclic:2");
        assert_eq!(v["components"], 2);
        assert_eq!(v["entries"][1]["x"], serde_json::json!(["0", "1"]));
        assert_eq!(v["entries"][1]["h_class_reps"], serde_json::json!(["1", "0"]));
        assert_eq!(v["entries"][1]["count"], 1);
        assert!(v.get("exact_entries").is_none());
    }
}
