//! Finite groups stored as full Cayley tables.
//!
//! Elements are dense indices `0..order`. Groups built from permutation
//! generators or the built-in families always put the identity at index 0
//! and number the remaining elements in breadth-first discovery order.
//! Tables read from a file keep the file's ordering; [`FiniteGroup::identity`]
//! records where the identity sits.
//!
//! Conjugacy classes of the whole group are computed at construction.
//! Centralizers are computed on first use and cached, so a `FiniteGroup`
//! can be shared freely between threads.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

/// Element index inside a [`FiniteGroup`].
pub type Elem = u32;

/// Default cap on the order of a materialized group.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("bad table shape: {0}")]
    BadShape(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("generated group exceeds the order cap of {cap}")]
    GroupTooLarge { cap: usize },
    #[error("bad permutation: {0}")]
    BadPermutation(String),
    #[error("element {elem} is not in the subgroup")]
    NotInSubgroup { elem: Elem },
    #[error("bad group spec {spec:?}: {reason}")]
    BadSpec { spec: String, reason: String },
    #[error("unknown element name {0:?}")]
    UnknownElement(String),
}

/// The group a conjugacy class was computed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ambient {
    Group,
    /// A proper or improper subgroup of the given order.
    Subgroup(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjClass {
    /// Smallest member index.
    pub representative: Elem,
    /// Sorted member indices.
    pub members: Vec<Elem>,
    pub ambient: Ambient,
}

impl ConjClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.members.binary_search(&g).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<Elem>,
    mask: Vec<bool>,
}

impl Subgroup {
    fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(g, _)| g as Elem)
            .collect();
        Subgroup { members, mask }
    }

    /// Sorted member indices.
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.mask.get(g as usize).copied().unwrap_or(false)
    }
}

/// Conjugacy classes of a centralizer `Cen(x)`, indexed for lookup.
#[derive(Debug, Clone)]
pub struct CentralizerClasses {
    pub x: Elem,
    /// Sorted by representative.
    pub classes: Vec<ConjClass>,
    rep_of: Vec<Option<Elem>>,
}

impl CentralizerClasses {
    /// Representative of the `Cen(x)`-class of `h`, or `None` if `h ∉ Cen(x)`.
    pub fn rep_of(&self, h: Elem) -> Option<Elem> {
        self.rep_of.get(h as usize).copied().flatten()
    }

    pub fn reps(&self) -> impl Iterator<Item = Elem> + '_ {
        self.classes.iter().map(|c| c.representative)
    }

    pub fn class_of(&self, h: Elem) -> Option<&ConjClass> {
        let r = self.rep_of(h)?;
        self.classes.iter().find(|c| c.representative == r)
    }
}

/// A finite group with an `order × order` multiplication table.
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    id: Elem,
    names: Vec<String>,
    classes: Vec<ConjClass>,
    class_of: Vec<usize>,
    centralizers: Vec<OnceLock<Subgroup>>,
    label: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("classes", &self.classes.len())
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table and builds the group.
    ///
    /// Associativity is checked with Light's test restricted to a generating
    /// set, which is exact and costs `O(order² · #generators)`.
    pub fn from_cayley_table(table: &[Vec<usize>], names: &[String]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::BadShape("empty table".into()));
        }
        if n > DEFAULT_ORDER_CAP {
            return Err(GroupError::GroupTooLarge { cap: DEFAULT_ORDER_CAP });
        }
        if !names.is_empty() && names.len() != n {
            return Err(GroupError::BadShape(format!(
                "{} names for a table of order {n}",
                names.len()
            )));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::BadShape(format!(
                    "row {r} has length {}, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::BadShape(format!("entry {v} in row {r} out of range")));
                }
                mul.push(v as Elem);
            }
        }

        if let Some((a, b, c)) = associativity_witness(n, &mul) {
            return Err(GroupError::NotAGroup(format!(
                "({a}*{b})*{c} != {a}*({b}*{c})"
            )));
        }

        let id = (0..n)
            .find(|&e| (0..n).all(|g| mul[e * n + g] as usize == g && mul[g * n + e] as usize == g))
            .ok_or_else(|| GroupError::NotAGroup("no two-sided identity".into()))?;
        let mut inv = vec![0 as Elem; n];
        for g in 0..n {
            let h = (0..n)
                .find(|&h| mul[g * n + h] as usize == id && mul[h * n + g] as usize == id)
                .ok_or_else(|| GroupError::NotAGroup(format!("element {g} has no inverse")))?;
            inv[g] = h as Elem;
        }

        let names = if names.is_empty() {
            (0..n).map(|g| g.to_string()).collect()
        } else {
            names.to_vec()
        };
        Ok(Self::assemble(mul, inv, id as Elem, names, format!("table:{n}")))
    }

    /// Closes a set of permutations of `{1..degree}` under composition.
    ///
    /// Each generator is a string in cycle notation, e.g. `"(1 2)(3 4)"`;
    /// `"()"` is the identity.
    pub fn from_permutation_generators(degree: usize, generators: &[&str]) -> Result<Self, GroupError> {
        Self::from_permutation_generators_capped(degree, generators, DEFAULT_ORDER_CAP)
    }

    pub fn from_permutation_generators_capped(
        degree: usize,
        generators: &[&str],
        cap: usize,
    ) -> Result<Self, GroupError> {
        if degree == 0 {
            return Err(GroupError::BadPermutation("degree must be positive".into()));
        }
        let gens = generators
            .iter()
            .map(|g| parse_cycles(degree, g))
            .collect::<Result<Vec<_>, _>>()?;
        let mut g = Self::close_permutations(degree, &gens, cap)?;
        g.label = format!("perm:{degree}:{}", generators.join(";"));
        Ok(g)
    }

    fn close_permutations(degree: usize, gens: &[Vec<u16>], cap: usize) -> Result<Self, GroupError> {
        let identity: Vec<u16> = (0..degree as u16).collect();
        let mut perms = vec![identity.clone()];
        let mut index: HashMap<Vec<u16>, Elem> = HashMap::from([(identity, 0)]);
        // parent[b] = (a, j) with b = a * gens[j]
        let mut parent: Vec<(Elem, usize)> = vec![(0, 0)];
        let mut right_gen: Vec<Vec<Elem>> = Vec::new();
        let mut queue = VecDeque::from([0 as Elem]);
        while let Some(a) = queue.pop_front() {
            let mut row = Vec::with_capacity(gens.len());
            for (j, s) in gens.iter().enumerate() {
                let prod = compose_perm(&perms[a as usize], s);
                let b = match index.get(&prod) {
                    Some(&b) => b,
                    None => {
                        if perms.len() >= cap {
                            return Err(GroupError::GroupTooLarge { cap });
                        }
                        let b = perms.len() as Elem;
                        index.insert(prod.clone(), b);
                        perms.push(prod);
                        parent.push((a, j));
                        queue.push_back(b);
                        b
                    }
                };
                row.push(b);
            }
            right_gen.push(row);
        }

        let n = perms.len();
        let mut mul = vec![0 as Elem; n * n];
        for a in 0..n {
            mul[a * n] = a as Elem;
        }
        // BFS order guarantees parent(b) < b.
        for b in 1..n {
            let (pb, j) = parent[b];
            for a in 0..n {
                let ap = mul[a * n + pb as usize];
                mul[a * n + b] = right_gen[ap as usize][j];
            }
        }
        let mut inv = vec![0 as Elem; n];
        for a in 0..n {
            let row = &mul[a * n..(a + 1) * n];
            inv[a] = row.iter().position(|&x| x == 0).expect("permutation group row") as Elem;
        }
        let names = perms.iter().map(|p| cycle_notation(p)).collect();
        Ok(Self::assemble(mul, inv, 0, names, String::new()))
    }

    /// Cyclic group of order `n`, elements named `0..n`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        check_order(n)?;
        let mul = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as Elem))
            .collect();
        let inv = (0..n).map(|a| ((n - a) % n) as Elem).collect();
        let names = (0..n).map(|a| a.to_string()).collect();
        Ok(Self::assemble(mul, inv, 0, names, format!("cyclic:{n}")))
    }

    /// Dihedral group of order `2n`: elements `r^a s^b` with `s r s = r^-1`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::BadSpec {
                spec: "dihedral:0".into(),
                reason: "N must be positive".into(),
            });
        }
        check_order(2 * n)?;
        let idx = |a: usize, b: usize| (b * n + a) as Elem;
        let mut mul = vec![0 as Elem; 4 * n * n];
        for b1 in 0..2 {
            for a1 in 0..n {
                for b2 in 0..2 {
                    for a2 in 0..n {
                        // r^a1 s^b1 r^a2 s^b2 = r^(a1 ± a2) s^(b1+b2)
                        let a = if b1 == 0 { a1 + a2 } else { a1 + n - a2 } % n;
                        let x = idx(a1, b1) as usize;
                        let y = idx(a2, b2) as usize;
                        mul[x * 2 * n + y] = idx(a, (b1 + b2) % 2);
                    }
                }
            }
        }
        let inv = (0..2 * n)
            .map(|x| {
                let (a, b) = (x % n, x / n);
                if b == 0 {
                    idx((n - a) % n, 0)
                } else {
                    x as Elem
                }
            })
            .collect();
        let names = (0..2 * n)
            .map(|x| {
                let (a, b) = (x % n, x / n);
                let r = match a {
                    0 => String::new(),
                    1 => "r".to_string(),
                    _ => format!("r^{a}"),
                };
                match (r.is_empty(), b) {
                    (true, 0) => "e".to_string(),
                    (false, 0) => r,
                    (_, _) => format!("{r}s"),
                }
            })
            .collect();
        Ok(Self::assemble(mul, inv, 0, names, format!("dihedral:{n}")))
    }

    /// Symmetric group on `n` letters, generated by `(1 2)` and `(1 2 … n)`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::BadSpec {
                spec: "symmetric:0".into(),
                reason: "N must be positive".into(),
            });
        }
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(vec_perm_swap(n));
        }
        if n >= 3 {
            gens.push((0..n as u16).map(|i| (i + 1) % n as u16).collect());
        }
        let mut g = Self::close_permutations(n, &gens, DEFAULT_ORDER_CAP)?;
        g.label = format!("symmetric:{n}");
        Ok(g)
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // Index 2u + s encodes sign s (0 = +) and unit u in 1, i, j, k.
        const UNIT: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let mut mul = vec![0 as Elem; 64];
        for x in 0..8 {
            for y in 0..8 {
                let (u, neg) = UNIT[x / 2][y / 2];
                let sign = (x % 2) ^ (y % 2) ^ usize::from(neg);
                mul[x * 8 + y] = (2 * u + sign) as Elem;
            }
        }
        let inv = (0..8)
            .map(|x| if x < 2 { x as Elem } else { (x ^ 1) as Elem })
            .collect();
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::assemble(mul, inv, 0, names, "quaternion:8".into())
    }

    /// Parses a group spec string: `cyclic:N`, `dihedral:N`, `symmetric:N`,
    /// `quaternion:8`, `perm:<degree>:<cycles;cycles;…>` or `file:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self, GroupError> {
        let bad = |reason: &str| GroupError::BadSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let (kind, rest) = spec.split_once(':').ok_or_else(|| bad("expected <kind>:<args>"))?;
        let number = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("expected a positive integer"));
        let mut g = match kind.trim() {
            "cyclic" => Self::cyclic(number(rest)?)?,
            "dihedral" => Self::dihedral(number(rest)?)?,
            "symmetric" => Self::symmetric(number(rest)?)?,
            "quaternion" => {
                if number(rest)? != 8 {
                    return Err(bad("only quaternion:8 is supported"));
                }
                Self::quaternion()
            }
            "perm" => {
                let (deg, gens) = rest.split_once(':').unwrap_or((rest, ""));
                let degree = number(deg)?;
                let gens: Vec<&str> = gens.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
                Self::from_permutation_generators(degree, &gens)?
            }
            "file" => Self::from_json_file(Path::new(rest))?,
            _ => return Err(bad("unknown group family")),
        };
        g.label = spec.to_string();
        Ok(g)
    }

    /// Reads `{"order": n, "mul": [[…]], "names": […]}`.
    pub fn from_json_file(path: &Path) -> Result<Self, GroupError> {
        #[derive(Deserialize)]
        struct TableFile {
            order: usize,
            mul: Vec<Vec<usize>>,
            #[serde(default)]
            names: Vec<String>,
        }
        let spec = format!("file:{}", path.display());
        let text = std::fs::read_to_string(path).map_err(|e| GroupError::BadSpec {
            spec: spec.clone(),
            reason: e.to_string(),
        })?;
        let file: TableFile = serde_json::from_str(&text).map_err(|e| GroupError::BadSpec {
            spec: spec.clone(),
            reason: e.to_string(),
        })?;
        if file.order != file.mul.len() {
            return Err(GroupError::BadShape(format!(
                "order {} but {} table rows",
                file.order,
                file.mul.len()
            )));
        }
        let mut g = Self::from_cayley_table(&file.mul, &file.names)?;
        g.label = spec;
        Ok(g)
    }

    fn assemble(mul: Vec<Elem>, inv: Vec<Elem>, id: Elem, names: Vec<String>, label: String) -> Self {
        let order = inv.len();
        let mut g = FiniteGroup {
            order,
            mul,
            inv,
            id,
            names,
            classes: Vec::new(),
            class_of: Vec::new(),
            centralizers: (0..order).map(|_| OnceLock::new()).collect(),
            label,
        };
        let all: Vec<Elem> = (0..order as Elem).collect();
        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for x in 0..order as Elem {
            if class_of[x as usize] != usize::MAX {
                continue;
            }
            let class = g.orbit(x, &all, Ambient::Group);
            for &m in &class.members {
                class_of[m as usize] = classes.len();
            }
            classes.push(class);
        }
        g.classes = classes;
        g.class_of = class_of;
        g
    }

    fn orbit(&self, x: Elem, by: &[Elem], ambient: Ambient) -> ConjClass {
        let mut seen = vec![false; self.order];
        for &g in by {
            seen[self.conj(g, x) as usize] = true;
        }
        let members: Vec<Elem> = (0..self.order as Elem).filter(|&m| seen[m as usize]).collect();
        ConjClass {
            representative: members[0],
            members,
            ambient,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.id
    }

    /// Spec string or other short description of how the group was built.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commute(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }

    pub fn name(&self, g: Elem) -> &str {
        &self.names[g as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Looks an element up by display name, or by `#<index>`.
    pub fn element_by_name(&self, name: &str) -> Result<Elem, GroupError> {
        let name = name.trim();
        if let Some(idx) = name.strip_prefix('#') {
            if let Ok(i) = idx.parse::<usize>() {
                if i < self.order {
                    return Ok(i as Elem);
                }
            }
        }
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i as Elem);
        }
        let squashed: String = name.split_whitespace().collect::<Vec<_>>().join(" ");
        self.names
            .iter()
            .position(|n| *n == squashed)
            .map(|i| i as Elem)
            .ok_or_else(|| GroupError::UnknownElement(name.to_string()))
    }

    /// `g^n` by binary exponentiation; negative `n` uses the inverse.
    pub fn power(&self, g: Elem, n: i64) -> Elem {
        let mut base = if n < 0 { self.inv(g) } else { g };
        let mut e = n.unsigned_abs();
        let mut acc = self.id;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: Elem) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.id {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Conjugacy classes of the whole group, sorted by representative.
    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        &self.classes
    }

    /// Index into [`Self::conjugacy_classes`] of the class containing `g`.
    pub fn class_index(&self, g: Elem) -> usize {
        self.class_of[g as usize]
    }

    pub fn class_of(&self, g: Elem) -> &ConjClass {
        &self.classes[self.class_of[g as usize]]
    }

    pub fn are_conjugate(&self, a: Elem, b: Elem) -> bool {
        self.class_of[a as usize] == self.class_of[b as usize]
    }

    /// `{g : gx = xg}`.
    pub fn centralizer(&self, x: Elem) -> &Subgroup {
        self.centralizers[x as usize].get_or_init(|| {
            let mask = (0..self.order as Elem).map(|g| self.commute(g, x)).collect();
            Subgroup::from_mask(mask)
        })
    }

    /// Conjugacy class of `h` under conjugation by members of `sub` only.
    pub fn class_in_subgroup(&self, sub: &Subgroup, h: Elem) -> Result<ConjClass, GroupError> {
        if !sub.contains(h) {
            return Err(GroupError::NotInSubgroup { elem: h });
        }
        let ambient = if sub.order() == self.order {
            Ambient::Group
        } else {
            Ambient::Subgroup(sub.order())
        };
        Ok(self.orbit(h, sub.members(), ambient))
    }

    /// All conjugacy classes of `sub`, sorted by representative.
    pub fn subgroup_classes(&self, sub: &Subgroup) -> Vec<ConjClass> {
        let mut done = vec![false; self.order];
        let mut out = Vec::new();
        for &h in sub.members() {
            if done[h as usize] {
                continue;
            }
            let class = self
                .class_in_subgroup(sub, h)
                .expect("member of its own subgroup");
            for &m in &class.members {
                done[m as usize] = true;
            }
            out.push(class);
        }
        out
    }

    /// Class representative in `Cen(x)` of every element of `Cen(x)`.
    pub fn centralizer_classes(&self, x: Elem) -> CentralizerClasses {
        let cen = self.centralizer(x);
        let classes = self.subgroup_classes(cen);
        let mut rep_of = vec![None; self.order];
        for c in &classes {
            for &m in &c.members {
                rep_of[m as usize] = Some(c.representative);
            }
        }
        CentralizerClasses { x, classes, rep_of }
    }

    /// Closure of `gens` under multiplication.
    pub fn generated_subgroup(&self, gens: &[Elem]) -> Subgroup {
        let mut mask = vec![false; self.order];
        mask[self.id as usize] = true;
        let mut queue = VecDeque::from([self.id]);
        while let Some(a) = queue.pop_front() {
            for &s in gens {
                let b = self.mul(a, s);
                if !mask[b as usize] {
                    mask[b as usize] = true;
                    queue.push_back(b);
                }
            }
        }
        Subgroup::from_mask(mask)
    }
}

fn check_order(n: usize) -> Result<(), GroupError> {
    if n == 0 {
        return Err(GroupError::BadShape("order must be positive".into()));
    }
    if n > DEFAULT_ORDER_CAP {
        return Err(GroupError::GroupTooLarge { cap: DEFAULT_ORDER_CAP });
    }
    Ok(())
}

/// Light's associativity test over a magma generating set.
fn associativity_witness(n: usize, mul: &[Elem]) -> Option<(usize, usize, usize)> {
    let m = |a: usize, b: usize| mul[a * n + b] as usize;
    let mut in_closure = vec![false; n];
    let mut closure: Vec<usize> = Vec::new();
    let mut gens = Vec::new();
    while closure.len() < n {
        let g = (0..n).find(|&x| !in_closure[x]).expect("closure incomplete");
        gens.push(g);
        let mut queue = VecDeque::from([g]);
        in_closure[g] = true;
        while let Some(u) = queue.pop_front() {
            closure.push(u);
            for &c in &closure {
                for prod in [m(u, c), m(c, u)] {
                    if !in_closure[prod] {
                        in_closure[prod] = true;
                        queue.push_back(prod);
                    }
                }
            }
        }
    }
    for &g in &gens {
        for a in 0..n {
            let ag = m(a, g);
            for c in 0..n {
                if m(ag, c) != m(a, m(g, c)) {
                    return Some((a, g, c));
                }
            }
        }
    }
    None
}

fn vec_perm_swap(n: usize) -> Vec<u16> {
    let mut p: Vec<u16> = (0..n as u16).collect();
    p.swap(0, 1);
    p
}

/// `(p ∘ q)(i) = p(q(i))`.
fn compose_perm(p: &[u16], q: &[u16]) -> Vec<u16> {
    q.iter().map(|&i| p[i as usize]).collect()
}

/// Parses cycle notation over `{1..degree}` into a 0-based image vector.
fn parse_cycles(degree: usize, text: &str) -> Result<Vec<u16>, GroupError> {
    let bad = |reason: String| GroupError::BadPermutation(format!("{text:?}: {reason}"));
    if degree > u16::MAX as usize {
        return Err(bad("degree too large".into()));
    }
    let mut perm: Vec<u16> = (0..degree as u16).collect();
    let mut seen = vec![false; degree];
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body_start = rest.strip_prefix('(').ok_or_else(|| bad("expected '('".into()))?;
        let close = body_start.find(')').ok_or_else(|| bad("unclosed cycle".into()))?;
        let body = &body_start[..close];
        rest = body_start[close + 1..].trim_start();
        let points = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                let v: usize = s.parse().map_err(|_| bad(format!("bad point {s:?}")))?;
                if v == 0 || v > degree {
                    return Err(bad(format!("point {v} outside 1..={degree}")));
                }
                Ok(v - 1)
            })
            .collect::<Result<Vec<_>, _>>()?;
        for &v in &points {
            if seen[v] {
                return Err(bad(format!("point {} repeated", v + 1)));
            }
            seen[v] = true;
        }
        for w in 0..points.len() {
            perm[points[w]] = points[(w + 1) % points.len()] as u16;
        }
    }
    Ok(perm)
}

fn cycle_notation(p: &[u16]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&(i + 1).to_string());
            i = p[i] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(g: &FiniteGroup) {
        let n = g.order();
        let e = g.identity();
        for a in g.elements() {
            assert_eq!(g.mul(a, e), a);
            assert_eq!(g.mul(e, a), a);
            assert_eq!(g.mul(a, g.inv(a)), e);
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in g.elements() {
                row[g.mul(a, b) as usize] = true;
                col[g.mul(b, a) as usize] = true;
            }
            assert!(row.iter().all(|&x| x) && col.iter().all(|&x| x));
        }
        if n <= 64 {
            for a in g.elements() {
                for b in g.elements() {
                    for c in g.elements() {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
        let total: usize = g.conjugacy_classes().iter().map(ConjClass::len).sum();
        assert_eq!(total, n);
        for x in g.elements() {
            let cen = g.centralizer(x);
            assert_eq!(cen.order() * g.class_of(x).len(), n);
            assert!(cen.contains(x) && cen.contains(e));
            let sum: usize = g.subgroup_classes(cen).iter().map(ConjClass::len).sum();
            assert_eq!(sum, cen.order());
        }
    }

    #[test]
    fn builtins_are_groups() {
        for spec in [
            "cyclic:1",
            "cyclic:6",
            "dihedral:1",
            "dihedral:4",
            "dihedral:5",
            "symmetric:1",
            "symmetric:3",
            "symmetric:4",
            "quaternion:8",
            "perm:7:(1 2 3 4 5 6 7);(2 3 5)(4 7 6)",
        ] {
            let g = FiniteGroup::from_spec(spec).unwrap();
            check_axioms(&g);
        }
        assert_eq!(FiniteGroup::from_spec("symmetric:4").unwrap().order(), 24);
        assert_eq!(FiniteGroup::from_spec("dihedral:4").unwrap().order(), 8);
        assert_eq!(
            FiniteGroup::from_spec("perm:7:(1 2 3 4 5 6 7);(2 3 5)(4 7 6)").unwrap().order(),
            21
        );
    }

    #[test]
    fn trivial_and_z2_tables() {
        let g = FiniteGroup::from_cayley_table(&[vec![0]], &[]).unwrap();
        assert_eq!(g.order(), 1);
        let g = FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]], &[]).unwrap();
        assert_eq!((g.order(), g.identity()), (2, 0));
    }

    #[test]
    fn identity_need_not_be_first_row() {
        let g = FiniteGroup::from_cayley_table(&[vec![1, 0], vec![0, 1]], &[]).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.power(0, 2), 1);
    }

    fn assert_witness(table: &[Vec<usize>]) {
        let err = FiniteGroup::from_cayley_table(table, &[]).unwrap_err();
        let GroupError::NotAGroup(msg) = err else { panic!("{err:?}") };
        let nums: Vec<usize> = msg
            .split(|c: char| !c.is_ascii_digit())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().unwrap())
            .collect();
        let (a, b, c) = (nums[0], nums[1], nums[2]);
        assert_ne!(table[table[a][b]][c], table[a][table[b][c]], "{msg}");
    }

    #[test]
    fn non_associative_tables() {
        // x*y = 2x + 2y mod 3: a Latin square, not associative
        let q: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (2 * x + 2 * y) % 3).collect()).collect();
        assert_witness(&q);
        // smallest non-associative loop (has an identity), order 5
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert_witness(&loop5);
        // Z_3 relabelled so that the identity is element 2
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        assert_eq!(FiniteGroup::from_cayley_table(&t, &[]).unwrap().identity(), 2);
    }

    #[test]
    fn bad_shapes() {
        assert!(matches!(FiniteGroup::from_cayley_table(&[], &[]), Err(GroupError::BadShape(_))));
        assert!(matches!(
            FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1]], &[]),
            Err(GroupError::BadShape(_))
        ));
        assert!(matches!(
            FiniteGroup::from_cayley_table(&[vec![0, 2], vec![1, 0]], &[]),
            Err(GroupError::BadShape(_))
        ));
    }

    #[test]
    fn permutation_closure() {
        let s3 = FiniteGroup::from_permutation_generators(3, &["(1 2)", "(1 2 3)"]).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.name(0), "()");
        let c4 = FiniteGroup::from_permutation_generators(4, &["(1 2 3 4)"]).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        let triv = FiniteGroup::from_permutation_generators(2, &[]).unwrap();
        assert_eq!(triv.order(), 1);
        assert!(matches!(
            FiniteGroup::from_permutation_generators(3, &["(1 4)"]),
            Err(GroupError::BadPermutation(_))
        ));
        assert!(matches!(
            FiniteGroup::from_permutation_generators(3, &["(1 2 1)"]),
            Err(GroupError::BadPermutation(_))
        ));
        assert!(matches!(
            FiniteGroup::from_permutation_generators_capped(4, &["(1 2)", "(1 2 3 4)"], 10),
            Err(GroupError::GroupTooLarge { cap: 10 })
        ));
    }

    #[test]
    fn s3_classes_and_centralizers() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let sizes: Vec<usize> = g.conjugacy_classes().iter().map(ConjClass::len).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        let reps: Vec<Elem> = g.conjugacy_classes().iter().map(|c| c.representative).collect();
        assert!(reps.windows(2).all(|w| w[0] < w[1]));

        let t = g.element_by_name("(1 2)").unwrap();
        let cen = g.centralizer(t);
        assert_eq!(cen.order(), 2);
        assert_eq!(g.centralizer(g.identity()).order(), 6);
        let c = g.class_in_subgroup(cen, t).unwrap();
        assert_eq!(c.members, vec![t]);
        assert_eq!(c.ambient, Ambient::Subgroup(2));

        let r = g.element_by_name("(1 2 3)").unwrap();
        let whole = g.centralizer(g.identity());
        assert_eq!(g.class_in_subgroup(whole, r).unwrap().len(), 2);
        assert!(matches!(
            g.class_in_subgroup(cen, r),
            Err(GroupError::NotInSubgroup { .. })
        ));

        let triv = g.generated_subgroup(&[]);
        assert_eq!(g.class_in_subgroup(&triv, g.identity()).unwrap().members, vec![g.identity()]);
    }

    #[test]
    fn abelian_classes_are_singletons() {
        let g = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(g.conjugacy_classes().len(), 4);
        for x in g.elements() {
            assert_eq!(g.centralizer(x).order(), 4);
        }
        let t = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(t.conjugacy_classes().len(), 1);
    }

    #[test]
    fn powers() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(z2.power(1, 3), 1);
        assert_eq!(z2.power(1, 0), 0);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let r = s3.element_by_name("(1 2 3)").unwrap();
        assert_eq!(s3.power(r, 9), s3.identity());
        assert_eq!(s3.power(r, 4), r);
        assert_eq!(s3.power(r, -1), s3.inv(r));
        // repeated multiplication
        let mut x = s3.identity();
        for k in 0..12 {
            assert_eq!(s3.power(r, k), x);
            x = s3.mul(x, r);
        }
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion();
        let i = q.element_by_name("i").unwrap();
        let j = q.element_by_name("j").unwrap();
        let k = q.element_by_name("k").unwrap();
        let m1 = q.element_by_name("-1").unwrap();
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), q.element_by_name("-k").unwrap());
        assert_eq!(q.power(i, 2), m1);
        assert_eq!(q.conjugacy_classes().len(), 5);
    }

    #[test]
    fn spec_errors() {
        assert!(FiniteGroup::from_spec("nope").is_err());
        assert!(FiniteGroup::from_spec("cyclic:x").is_err());
        assert!(FiniteGroup::from_spec("quaternion:16").is_err());
        assert!(FiniteGroup::from_spec("cyclic:0").is_err());
        assert!(FiniteGroup::from_spec("file:/nonexistent/group.json").is_err());
    }

    #[test]
    fn json_file_roundtrip() {
        let dir = std::env::temp_dir().join(format!("pdw-group-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("z3.json");
        std::fs::write(&path, r#"{"order": 3, "mul": [[0,1,2],[1,2,0],[2,0,1]], "names": ["e","a","b"]}"#).unwrap();
        let g = FiniteGroup::from_spec(&format!("file:{}", path.display())).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.element_by_name("b").unwrap(), 2);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn element_lookup() {
        let g = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(g.element_by_name("#0").unwrap(), 0);
        assert_eq!(g.element_by_name("(1  2)").unwrap(), g.element_by_name("(1 2)").unwrap());
        assert!(g.element_by_name("(1 4)").is_err());
    }
}
