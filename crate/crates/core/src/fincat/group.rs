use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// A finite group given by its multiplication table. `table[a][b]` is `ab`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// A subgroup, stored as its sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    /// Sort key: order first, then elements.
    fn key(&self) -> (usize, &[usize]) {
        (self.elements.len(), &self.elements)
    }
}

impl FiniteGroup {
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = names.len();
        let bad = |m: &str| Error::NotAGroupTable(m.to_string());
        if n == 0 {
            return Err(bad("empty group"));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(bad("table is not n x n over the element indices"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| bad("no identity element"))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroupTable(format!(
                            "({0}{1}){2} != {0}({1}{2})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for (a, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&b| table[a][b] == identity)
                .ok_or_else(|| Error::NotAGroupTable(format!("{} has no inverse", names[a])))?;
        }
        Ok(FiniteGroup { names, table, identity, inverse })
    }

    /// Cyclic group of order `n` with elements `0..n` under addition.
    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(names, table)
    }

    /// Symmetric group on `n` letters; elements are permutations in one-line
    /// notation, listed lexicographically so the identity comes first.
    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        if n > 5 {
            return Err(Error::SizeBudgetExceeded(format!("symmetric group on {n} letters")));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        permutations(&mut cur, 0, &mut perms);
        perms.sort();
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        // (ab)(i) = a(b(i)): apply b first.
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index(&b.iter().map(|&i| a[i]).collect())).collect())
            .collect();
        let names = perms
            .iter()
            .map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<String>())
            .collect();
        Self::from_table(names, table)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<usize> = gens.iter().copied().collect();
        while let Some(g) = queue.pop_front() {
            if !set.insert(g) {
                continue;
            }
            let current: Vec<usize> = set.iter().copied().collect();
            for h in current {
                for p in [self.mul(g, h), self.mul(h, g)] {
                    if !set.contains(&p) {
                        queue.push_back(p);
                    }
                }
            }
        }
        Subgroup { elements: set.into_iter().collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![self.identity] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.order()).collect() }
    }

    /// Every subgroup, sorted by order and then elements.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Subgroup> = BTreeSet::from([self.trivial_subgroup()]);
        let mut queue = vec![self.trivial_subgroup()];
        while let Some(h) = queue.pop() {
            for g in 0..self.order() {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.elements.clone();
                gens.push(g);
                let k = self.generated(&gens);
                if found.insert(k.clone()) {
                    queue.push(k);
                }
            }
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        all.sort_by(|a, b| a.key().cmp(&b.key()));
        all
    }

    /// `g⁻¹ H g`.
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inv(g);
        let mut e: Vec<usize> = h.elements.iter().map(|&x| self.mul(self.mul(gi, x), g)).collect();
        e.sort_unstable();
        Subgroup { elements: e }
    }

    pub fn are_conjugate(&self, a: &Subgroup, b: &Subgroup) -> bool {
        a.order() == b.order() && (0..self.order()).any(|g| self.conjugate(a, g) == *b)
    }

    /// Groups `subs` into conjugacy classes; each class is listed in the input
    /// order and the classes are ordered by their first member.
    pub fn conjugacy_classes(&self, subs: &[Subgroup]) -> Vec<Vec<Subgroup>> {
        let mut classes: Vec<Vec<Subgroup>> = Vec::new();
        for s in subs {
            match classes.iter_mut().find(|c| self.are_conjugate(&c[0], s)) {
                Some(c) => c.push(s.clone()),
                None => classes.push(vec![s.clone()]),
            }
        }
        classes
    }

    /// Smallest element of the left coset `aH`.
    pub fn coset_rep(&self, a: usize, h: &Subgroup) -> usize {
        h.elements.iter().map(|&x| self.mul(a, x)).min().unwrap()
    }

    /// Canonical representatives of the left cosets of `h`, ascending.
    pub fn left_coset_reps(&self, h: &Subgroup) -> Vec<usize> {
        let reps: BTreeSet<usize> = (0..self.order()).map(|a| self.coset_rep(a, h)).collect();
        reps.into_iter().collect()
    }

    pub fn is_p_group(&self, h: &Subgroup, p: usize) -> bool {
        let mut n = h.order();
        while n % p == 0 {
            n /= p;
        }
        n == 1
    }
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}
