//! Finite groups by multiplication table, their subgroups and cosets.

use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    /// mul[i * order + j] = index of g_i * g_j
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    /// Validates the full table: closure bounds, identity, inverses,
    /// associativity.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::BadGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadGroup(format!("row {} has length {} != {}", i, row.len(), n)));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::BadGroup(format!("entry ({},{}) out of range", i, j)));
                }
            }
        }
        let mut identity = None;
        for e in 0..n {
            if (0..n).all(|i| table[e][i] == i && table[i][e] == i) {
                identity = Some(e);
                break;
            }
        }
        let Some(identity) = identity else {
            return Err(Error::BadGroup("no identity element".into()));
        };
        let mut inv = vec![usize::MAX; n];
        for i in 0..n {
            match (0..n).find(|&j| table[i][j] == identity && table[j][i] == identity) {
                Some(j) => inv[i] = j,
                None => return Err(Error::BadGroup(format!("element {} has no inverse", i))),
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(Error::BadGroup(format!("associativity fails at ({},{},{})", i, j, k)));
                    }
                }
            }
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("g{}", i)).collect());
        if labels.len() != n {
            return Err(Error::BadGroup("label count mismatch".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for row in &table {
            mul.extend_from_slice(row);
        }
        Ok(FiniteGroup { order: n, mul, inv, identity, labels })
    }

    pub fn trivial() -> Arc<Self> {
        Arc::new(Self::from_table(vec![vec![0]], Some(vec!["1".into()])).unwrap())
    }

    pub fn cyclic(n: usize) -> Arc<Self> {
        assert!(n > 0);
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let labels = (0..n).map(|i| format!("c{}", i)).collect();
        Arc::new(Self::from_table(table, Some(labels)).unwrap())
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Arc<Self> {
        let n = a.order * b.order;
        let idx = |x: usize, y: usize| x * b.order + y;
        let mut table = vec![vec![0; n]; n];
        for x1 in 0..a.order {
            for y1 in 0..b.order {
                for x2 in 0..a.order {
                    for y2 in 0..b.order {
                        table[idx(x1, y1)][idx(x2, y2)] = idx(a.mul(x1, x2), b.mul(y1, y2));
                    }
                }
            }
        }
        let labels = (0..a.order)
            .flat_map(|x| (0..b.order).map(move |y| (x, y)))
            .map(|(x, y)| format!("({},{})", a.labels[x], b.labels[y]))
            .collect();
        Arc::new(Self::from_table(table, Some(labels)).unwrap())
    }

    pub fn klein_four() -> Arc<Self> {
        let c2 = Self::cyclic(2);
        Self::direct_product(&c2, &c2)
    }

    /// Closure of a set of permutations of {0..degree-1} under composition.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<Arc<Self>> {
        for g in gens {
            if g.len() != degree {
                return Err(Error::BadGroup("permutation degree mismatch".into()));
            }
            let mut seen = vec![false; degree];
            for &v in g {
                if v >= degree || seen[v] {
                    return Err(Error::BadGroup("not a permutation".into()));
                }
                seen[v] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems: Vec<Vec<usize>> = vec![id];
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            for g in gens {
                let prod: Vec<usize> = (0..degree).map(|x| g[elems[i][x]]).collect();
                if !elems.contains(&prod) {
                    elems.push(prod);
                    frontier.push(elems.len() - 1);
                }
            }
        }
        elems.sort();
        let n = elems.len();
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod: Vec<usize> = (0..degree).map(|x| elems[i][elems[j][x]]).collect();
                table[i][j] = elems.iter().position(|e| e == &prod).unwrap();
            }
        }
        let labels = elems
            .iter()
            .map(|p| {
                let cyc: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                format!("[{}]", cyc.join(""))
            })
            .collect();
        Ok(Arc::new(Self::from_table(table, Some(labels))?))
    }

    pub fn symmetric3() -> Arc<Self> {
        Self::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    pub fn dihedral4() -> Arc<Self> {
        // Symmetries of the square, degree-4 permutations.
        Self::from_permutations(4, &[vec![1, 2, 3, 0], vec![1, 0, 3, 2]]).unwrap()
    }

    pub fn quaternion8() -> Arc<Self> {
        // Regular representation of Q8 on its 8 elements {±1, ±i, ±j, ±k}.
        // i = (1 i -1 -i)(j -k -j k), j = (1 j -1 -j)(i k -i -k)
        // order: 1,-1,i,-i,j,-j,k,-k -> 0..8
        let i = vec![2, 3, 1, 0, 7, 6, 4, 5];
        let j = vec![4, 5, 6, 7, 1, 0, 3, 2];
        Self::from_permutations(8, &[i, j]).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Subgroup generated by a set of elements.
    pub fn generated_subgroup(self: &Arc<Self>, gens: &[usize]) -> Subgroup {
        let mut elems = vec![self.identity];
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if !elems.contains(&y) {
                        elems.push(y);
                        frontier.push(y);
                    }
                }
            }
        }
        elems.sort_unstable();
        Subgroup { parent: self.clone(), elements: elems }
    }

    pub fn trivial_subgroup(self: &Arc<Self>) -> Subgroup {
        Subgroup { parent: self.clone(), elements: vec![self.identity] }
    }

    pub fn full_subgroup(self: &Arc<Self>) -> Subgroup {
        Subgroup { parent: self.clone(), elements: (0..self.order).collect() }
    }

    /// All subgroups, by closure over element subsets (desk scale only).
    pub fn all_subgroups(self: &Arc<Self>) -> Vec<Subgroup> {
        let mut found: Vec<Subgroup> = vec![self.trivial_subgroup()];
        let mut queue: Vec<Vec<usize>> = vec![vec![self.identity]];
        while let Some(base) = queue.pop() {
            for g in 0..self.order {
                if base.contains(&g) {
                    continue;
                }
                let mut gens = base.clone();
                gens.push(g);
                let sub = self.generated_subgroup(&gens);
                if !found.iter().any(|s| s.elements == sub.elements) {
                    queue.push(sub.elements.clone());
                    found.push(sub);
                }
            }
        }
        found.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        found
    }

    /// One representative per conjugacy class of cyclic subgroups,
    /// the trivial subgroup included. Deterministic order.
    pub fn cyclic_subgroups_up_to_conjugacy(self: &Arc<Self>) -> Vec<Subgroup> {
        let mut reps: Vec<Subgroup> = Vec::new();
        let mut subs: Vec<Subgroup> = (0..self.order).map(|g| self.generated_subgroup(&[g])).collect();
        subs.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        for s in subs {
            let conjugates: Vec<Vec<usize>> =
                (0..self.order).map(|g| s.conjugate(g).elements).collect();
            if !reps.iter().any(|r| conjugates.contains(&r.elements)) {
                reps.push(s);
            }
        }
        reps
    }

    /// Sylow subgroups, one per prime, found among all subgroups.
    pub fn sylow_subgroups(self: &Arc<Self>) -> Vec<Subgroup> {
        let n = self.order;
        let mut primes = Vec::new();
        let mut m = n;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                primes.push(p);
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        let subs = self.all_subgroups();
        primes
            .into_iter()
            .map(|p| {
                let mut pk = 1;
                while n % (pk * p) == 0 {
                    pk *= p;
                }
                subs.iter().find(|s| s.order() == pk).expect("Sylow subgroup exists").clone()
            })
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    /// Sorted element indices, closed under product and inverse.
    elements: Vec<usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.elements.iter().map(|&e| self.parent.label(e)).collect();
        write!(f, "Subgroup{{{}}}", labels.join(","))
    }
}

impl Subgroup {
    pub fn new(parent: Arc<FiniteGroup>, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if !elements.contains(&parent.identity()) {
            return Err(Error::NotSubgroup);
        }
        for &a in &elements {
            if a >= parent.order() {
                return Err(Error::NotSubgroup);
            }
            if !elements.contains(&parent.inv(a)) {
                return Err(Error::NotSubgroup);
            }
            for &b in &elements {
                if elements.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::NotSubgroup);
                }
            }
        }
        Ok(Subgroup { parent, elements })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        other.elements.iter().all(|&g| self.contains(g))
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements.iter().any(|&g| self.parent.element_order(g) == self.order())
    }

    pub fn conjugate(&self, g: usize) -> Subgroup {
        let p = &self.parent;
        let mut elems: Vec<usize> =
            self.elements.iter().map(|&h| p.mul(p.mul(g, h), p.inv(g))).collect();
        elems.sort_unstable();
        Subgroup { parent: self.parent.clone(), elements: elems }
    }

    /// Is some conjugate of `other` contained in self? Returns a conjugator.
    pub fn contains_conjugate_of(&self, other: &Subgroup) -> Option<usize> {
        (0..self.parent.order()).find(|&g| self.contains_subgroup(&other.conjugate(g)))
    }

    /// Representatives of the right cosets Δg, scanning elements in index
    /// order (so the identity represents Δ itself).
    pub fn right_coset_reps(&self) -> Vec<usize> {
        let p = &self.parent;
        let mut seen = vec![false; p.order()];
        let mut reps = Vec::new();
        for g in 0..p.order() {
            if !seen[g] {
                reps.push(g);
                for &h in &self.elements {
                    seen[p.mul(h, g)] = true;
                }
            }
        }
        reps
    }

    /// Representatives of the left cosets gΔ.
    pub fn left_coset_reps(&self) -> Vec<usize> {
        let p = &self.parent;
        let mut seen = vec![false; p.order()];
        let mut reps = Vec::new();
        for g in 0..p.order() {
            if !seen[g] {
                reps.push(g);
                for &h in &self.elements {
                    seen[p.mul(g, h)] = true;
                }
            }
        }
        reps
    }

    /// The subgroup as a group in its own right, with the index map back
    /// into the parent.
    pub fn as_group(&self) -> (Arc<FiniteGroup>, Vec<usize>) {
        let n = self.order();
        let pos = |g: usize| self.elements.binary_search(&g).unwrap();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| pos(self.parent.mul(self.elements[i], self.elements[j]))).collect())
            .collect();
        let labels = self.elements.iter().map(|&e| self.parent.label(e).to_string()).collect();
        let g = Arc::new(FiniteGroup::from_table(table, Some(labels)).unwrap());
        (g, self.elements.clone())
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let elems: Vec<usize> =
            self.elements.iter().copied().filter(|&g| other.contains(g)).collect();
        Subgroup { parent: self.parent.clone(), elements: elems }
    }

    /// Short human-readable name: label of a generator for cyclic subgroups,
    /// otherwise the element list.
    pub fn describe(&self) -> String {
        if self.order() == 1 {
            return "1".to_string();
        }
        for &g in &self.elements {
            if self.parent.element_order(g) == self.order() {
                return format!("<{}>", self.parent.label(g));
            }
        }
        let labels: Vec<&str> = self.elements.iter().map(|&e| self.parent.label(e)).collect();
        format!("{{{}}}", labels.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_structure() {
        let g = FiniteGroup::cyclic(6);
        assert_eq!(g.order(), 6);
        assert_eq!(g.element_order(1), 6);
        assert_eq!(g.element_order(2), 3);
        assert_eq!(g.inv(1), 5);
    }

    #[test]
    fn bad_tables_rejected() {
        // broken associativity: x*x=x for all x but no structure
        let t = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table(t, None).is_err());
    }

    #[test]
    fn s3_from_permutations() {
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        let orders: Vec<usize> = s3.elements().map(|e| s3.element_order(e)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 3);
        assert_eq!(orders.iter().filter(|&&o| o == 3).count(), 2);
    }

    #[test]
    fn cyclic_subgroups_trivial_group() {
        let g = FiniteGroup::trivial();
        let subs = g.cyclic_subgroups_up_to_conjugacy();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].order(), 1);
    }

    #[test]
    fn cyclic_subgroups_klein_four() {
        let g = FiniteGroup::klein_four();
        let subs = g.cyclic_subgroups_up_to_conjugacy();
        // 1, and the three subgroups of order 2 (all normal, so no merging).
        assert_eq!(subs.len(), 4);
        assert_eq!(subs.iter().filter(|s| s.order() == 2).count(), 3);
    }

    #[test]
    fn cyclic_subgroups_s3_up_to_conjugacy() {
        let g = FiniteGroup::symmetric3();
        let subs = g.cyclic_subgroups_up_to_conjugacy();
        // trivial, one class of order 2, one class of order 3
        assert_eq!(subs.len(), 3);
        let orders: Vec<usize> = subs.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 3]);
    }

    #[test]
    fn coset_reps_cover() {
        let g = FiniteGroup::cyclic(4);
        let h = g.generated_subgroup(&[2]);
        let reps = h.right_coset_reps();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], g.identity());
        let lreps = h.left_coset_reps();
        assert_eq!(lreps.len(), 2);
    }

    #[test]
    fn sylow_of_s3() {
        let g = FiniteGroup::symmetric3();
        let syl = g.sylow_subgroups();
        let mut orders: Vec<usize> = syl.iter().map(|s| s.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 3]);
    }

    #[test]
    fn subgroup_as_group() {
        let g = FiniteGroup::cyclic(6);
        let h = g.generated_subgroup(&[2]);
        let (hg, emb) = h.as_group();
        assert_eq!(hg.order(), 3);
        assert_eq!(emb.len(), 3);
        // multiplication agrees through the embedding
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(emb[hg.mul(i, j)], g.mul(emb[i], emb[j]));
            }
        }
    }
}
