//! Finite groups as explicit Cayley tables, plus the stock constructions
//! (cyclic, symmetric-3, dihedral-8, quaternion, products) used everywhere
//! in the test corpus and the CLI catalog.

use num_integer::Integer;
use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A finite group given by its multiplication table. Element 0-based indices
/// are the working representation; labels are for I/O only.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Builds from a raw table, locating identity and inverses.
    /// Fails if the table is not a group table.
    pub fn from_table(name: &str, elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::precondition("group-table-shape", "table must be n x n"));
        }
        if table.iter().flatten().any(|&v| v >= n) {
            return Err(Error::precondition("group-table-range", "entry out of range"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::precondition("group-identity", "no two-sided identity"))?;
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| {
                    Error::precondition("group-inverses", format!("element {a} has no inverse"))
                })?;
        }
        let g = FiniteGroup { name: name.to_string(), elements, table, identity, inverse };
        g.validate()?;
        Ok(g)
    }

    /// Full axiom check (associativity is cubic; intended for catalog-sized
    /// groups and tests, not for large constructed products).
    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::precondition(
                            "group-associativity",
                            format!(
                                "({} * {}) * {} != {} * ({} * {})",
                                self.elements[a],
                                self.elements[b],
                                self.elements[c],
                                self.elements[a],
                                self.elements[b],
                                self.elements[c]
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.elements.len()
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

    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        // h g h^{-1}
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut p = g;
        while p != self.identity {
            p = self.mul(p, g);
            k += 1;
        }
        k
    }

    /// <g> as the list [e, g, g^2, ...].
    pub fn cyclic_subgroup(&self, g: usize) -> Vec<usize> {
        let mut out = vec![self.identity];
        let mut p = g;
        while p != self.identity {
            out.push(p);
            p = self.mul(p, g);
        }
        out
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1usize, |acc, g| acc.lcm(&self.element_order(g)))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, each sorted, ordered by their smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|h| self.conjugate(h, g)).collect();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order()).filter(|&h| self.mul(h, g) == self.mul(g, h)).collect()
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::new();
        set.insert(self.identity);
        let mut frontier: Vec<usize> = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if set.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
        set.into_iter().collect()
    }

    /// Order of the abelianization G / [G, G].
    pub fn abelianization_order(&self) -> usize {
        let n = self.order();
        let mut comms = Vec::new();
        for a in 0..n {
            for b in 0..n {
                comms.push(self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))));
            }
        }
        let derived = self.closure(&comms);
        n / derived.len()
    }

    pub fn label(&self, g: usize) -> &str {
        &self.elements[g]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    // -- stock constructions ------------------------------------------------

    pub fn trivial() -> FiniteGroup {
        FiniteGroup {
            name: "Z1".into(),
            elements: vec!["e".into()],
            table: vec![vec![0]],
            identity: 0,
            inverse: vec![0],
        }
    }

    /// Z/n, written additively with elements "0".."n-1".
    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let elements = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        FiniteGroup { name: format!("Z{n}"), elements, table, identity: 0, inverse }
    }

    /// Symmetric group on 3 letters via its permutation action.
    pub fn symmetric_3() -> FiniteGroup {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2], // e
            [1, 0, 2], // (12)
            [2, 1, 0], // (13)
            [0, 2, 1], // (23)
            [1, 2, 0], // (123): 0->1->2->0
            [2, 0, 1], // (132)
        ];
        let labels = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];
        Self::from_permutations("S3", &labels, &perms)
    }

    /// Dihedral group of order 8 (symmetries of the square).
    pub fn dihedral_8() -> FiniteGroup {
        // r = rotation of the square's vertices, s = reflection.
        let r = [1usize, 2, 3, 0];
        let s = [1usize, 0, 3, 2];
        let mut perms: Vec<[usize; 4]> = Vec::new();
        let compose4 = |a: &[usize; 4], b: &[usize; 4]| {
            let mut c = [0usize; 4];
            for i in 0..4 {
                c[i] = a[b[i]];
            }
            c
        };
        let mut rk = [0usize, 1, 2, 3];
        for _ in 0..4 {
            perms.push(rk);
            rk = compose4(&r, &rk);
        }
        for k in 0..4 {
            perms.push(compose4(&perms[k], &s));
        }
        let labels = ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"];
        Self::from_permutations("D4", &labels, &perms)
    }

    /// Quaternion group {±1, ±i, ±j, ±k}.
    pub fn quaternion_8() -> FiniteGroup {
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
        // Encode q = sign * basis with basis in {1, i, j, k}.
        let basis_mul = |a: usize, b: usize| -> (i32, usize) {
            // returns (sign, basis) for basis-a * basis-b
            match (a, b) {
                (0, x) => (1, x),
                (x, 0) => (1, x),
                (1, 1) => (-1, 0),
                (2, 2) => (-1, 0),
                (3, 3) => (-1, 0),
                (1, 2) => (1, 3),
                (2, 1) => (-1, 3),
                (2, 3) => (1, 1),
                (3, 2) => (-1, 1),
                (3, 1) => (1, 2),
                (1, 3) => (-1, 2),
                _ => unreachable!(),
            }
        };
        let decode = |idx: usize| -> (i32, usize) {
            let sign = if idx % 2 == 0 { 1 } else { -1 };
            (sign, idx / 2)
        };
        let encode = |sign: i32, basis: usize| -> usize { basis * 2 + usize::from(sign < 0) };
        let mut table = vec![vec![0usize; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let (sa, ba) = decode(a);
                let (sb, bb) = decode(b);
                let (sm, bm) = basis_mul(ba, bb);
                table[a][b] = encode(sa * sb * sm, bm);
            }
        }
        let elements = labels.iter().map(|s| s.to_string()).collect();
        FiniteGroup::from_table("Q8", elements, table).expect("Q8 table is a group")
    }

    /// Klein four-group (Z/2)^2.
    pub fn klein_four() -> FiniteGroup {
        let mut g = Product::new(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)).group;
        g.name = "V4".into();
        g
    }

    fn from_permutations<const N: usize>(
        name: &str,
        labels: &[&str],
        perms: &[[usize; N]],
    ) -> FiniteGroup {
        let n = perms.len();
        let find = |p: &[usize; N]| perms.iter().position(|q| q == p).expect("closed under mul");
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut c = [0usize; N];
                for i in 0..N {
                    c[i] = perms[a][perms[b][i]];
                }
                table[a][b] = find(&c);
            }
        }
        let elements = labels.iter().map(|s| s.to_string()).collect();
        FiniteGroup::from_table(name, elements, table).expect("permutation table is a group")
    }
}

/// A direct product A x B with index convention `idx = a * |B| + b`.
pub struct Product {
    pub group: FiniteGroup,
    pub left_order: usize,
    pub right_order: usize,
}

impl Product {
    pub fn new(a: &FiniteGroup, b: &FiniteGroup) -> Product {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let elements = (0..n)
            .map(|i| format!("{}|{}", a.elements[i / nb], b.elements[i % nb]))
            .collect();
        let mut table = vec![vec![0usize; n]; n];
        for x in 0..n {
            for y in 0..n {
                table[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
            }
        }
        let identity = a.identity() * nb + b.identity();
        let inverse = (0..n).map(|x| a.inv(x / nb) * nb + b.inv(x % nb)).collect();
        Product {
            group: FiniteGroup {
                name: format!("{}x{}", a.name, b.name),
                elements,
                table,
                identity,
                inverse,
            },
            left_order: na,
            right_order: nb,
        }
    }

    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.right_order + b
    }

    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.right_order, idx % self.right_order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stock_groups_are_groups() {
        for g in [
            FiniteGroup::trivial(),
            FiniteGroup::cyclic(6),
            FiniteGroup::symmetric_3(),
            FiniteGroup::dihedral_8(),
            FiniteGroup::quaternion_8(),
            FiniteGroup::klein_four(),
        ] {
            g.validate().unwrap_or_else(|e| panic!("{} failed: {e}", g.name));
        }
    }

    #[test]
    fn s3_structure() {
        let s3 = FiniteGroup::symmetric_3();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let classes = s3.conjugacy_classes();
        let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(s3.abelianization_order(), 2);
        assert_eq!(s3.exponent(), 6);
        // Centralizer of a transposition has order 2.
        let t = s3.index_of("(12)").unwrap();
        assert_eq!(s3.centralizer(t).len(), 2);
    }

    #[test]
    fn q8_structure() {
        let q8 = FiniteGroup::quaternion_8();
        let i = q8.index_of("i").unwrap();
        let j = q8.index_of("j").unwrap();
        let k = q8.index_of("k").unwrap();
        let m1 = q8.index_of("-1").unwrap();
        assert_eq!(q8.mul(i, j), k);
        assert_eq!(q8.mul(j, i), q8.index_of("-k").unwrap());
        assert_eq!(q8.mul(i, i), m1);
        assert_eq!(q8.element_order(i), 4);
        assert_eq!(q8.conjugacy_classes().len(), 5);
        assert_eq!(q8.abelianization_order(), 4);
        // Z(Q8) = {1, -1}: centralizer of -1 is everything.
        assert_eq!(q8.centralizer(m1).len(), 8);
    }

    #[test]
    fn d4_structure() {
        let d4 = FiniteGroup::dihedral_8();
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        assert_eq!(d4.conjugacy_classes().len(), 5);
        assert_eq!(d4.abelianization_order(), 4);
        let r = d4.index_of("r").unwrap();
        assert_eq!(d4.element_order(r), 4);
    }

    #[test]
    fn product_indexing() {
        let p = Product::new(&FiniteGroup::cyclic(4), &FiniteGroup::cyclic(2));
        p.group.validate().unwrap();
        let x = p.pair(3, 1);
        assert_eq!(p.split(x), (3, 1));
        assert_eq!(p.group.mul(p.pair(3, 1), p.pair(2, 1)), p.pair(1, 0));
        assert_eq!(p.group.exponent(), 4);
    }

    #[test]
    fn cyclic_closure_and_orders() {
        let z12 = FiniteGroup::cyclic(12);
        assert_eq!(z12.element_order(4), 3);
        assert_eq!(z12.cyclic_subgroup(4), vec![0, 4, 8]);
        assert_eq!(z12.closure(&[8]), vec![0, 4, 8]);
        assert_eq!(z12.abelianization_order(), 12);
    }
}
