//! Finite groupoids: explicit objects, morphisms, a partial composition
//! table, identities and inverses — plus maps, natural isomorphisms, the
//! standard fiber-product / equalizer models, and equivalence checking.
//!
//! Composition is written `g ∘ f` ("g after f"); `compose(g, f)` is defined
//! exactly when `dst(f) = src(g)`. All axioms are machine-checkable and
//! [`FiniteGroupoid::validate`] checks every one of them exhaustively,
//! returning the first violated axiom with witnesses.

pub mod group;

pub use group::{FiniteGroup, Product};

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard cap on composition-table entries any single construction will build.
const COMPOSE_GUARD: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct Mor {
    pub label: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<Mor>,
    /// (g, f) -> g∘f, defined exactly for composable pairs.
    compose: HashMap<(usize, usize), usize>,
    /// Per-object identity morphism.
    ident: Vec<usize>,
    /// Per-morphism inverse.
    inv: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn from_parts(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<Mor>,
        compose: HashMap<(usize, usize), usize>,
        ident: Vec<usize>,
        inv: Vec<usize>,
    ) -> Self {
        FiniteGroupoid { name: name.into(), objects, morphisms, compose, ident, inv }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn src(&self, m: usize) -> usize {
        self.morphisms[m].src
    }

    pub fn dst(&self, m: usize) -> usize {
        self.morphisms[m].dst
    }

    /// g∘f when dst(f) = src(g).
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    /// g∘f, panicking on non-composable arguments (internal hot path).
    pub fn comp(&self, g: usize, f: usize) -> usize {
        *self
            .compose
            .get(&(g, f))
            .unwrap_or_else(|| panic!("morphisms {g} and {f} are not composable"))
    }

    pub fn identity_of(&self, x: usize) -> usize {
        self.ident[x]
    }

    /// Iterates (g, f, g∘f) over all composable pairs.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.compose.iter().map(|(&(g, f), &gf)| (g, f, gf))
    }

    pub fn composable_count(&self) -> usize {
        self.compose.len()
    }

    pub fn inverse(&self, m: usize) -> usize {
        self.inv[m]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.ident.get(self.morphisms[m].src) == Some(&m)
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    pub fn morphism_index(&self, label: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.label == label)
    }

    /// All morphisms x -> y, in index order.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&m| self.morphisms[m].src == x && self.morphisms[m].dst == y)
            .collect()
    }

    pub fn aut(&self, x: usize) -> Vec<usize> {
        self.hom(x, x)
    }

    /// Connected-component id per object (components are iso classes).
    pub fn components(&self) -> Vec<usize> {
        let n = self.objects.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for m in &self.morphisms {
            let (a, b) = (find(&mut parent, m.src), find(&mut parent, m.dst));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut canon: BTreeMap<usize, usize> = BTreeMap::new();
        (0..n)
            .map(|x| {
                let r = find(&mut parent, x);
                let next = canon.len();
                *canon.entry(r).or_insert(next)
            })
            .collect()
    }

    /// Exhaustive axiom check; reports the first violation with witnesses.
    pub fn validate(&self) -> Result<()> {
        let nm = self.morphisms.len();
        let fail = |name: &str, detail: String| Err(Error::precondition(name, detail));
        if self.ident.len() != self.objects.len() {
            return fail("groupoid-ident", "one identity required per object".into());
        }
        if self.inv.len() != nm {
            return fail("groupoid-inv", "one inverse required per morphism".into());
        }
        for (x, &e) in self.ident.iter().enumerate() {
            if e >= nm || self.morphisms[e].src != x || self.morphisms[e].dst != x {
                return fail(
                    "groupoid-ident",
                    format!("identity of object `{}` is not an endomorphism of it", self.objects[x]),
                );
            }
        }
        for m in &self.morphisms {
            if m.src >= self.objects.len() || m.dst >= self.objects.len() {
                return fail("groupoid-endpoints", format!("morphism `{}` out of range", m.label));
            }
        }
        // Composition: defined exactly on composable pairs, correct endpoints.
        for (&(g, f), &gf) in &self.compose {
            if g >= nm || f >= nm || gf >= nm {
                return fail("groupoid-compose", format!("compose entry ({g},{f}) out of range"));
            }
            if self.morphisms[f].dst != self.morphisms[g].src {
                return fail(
                    "groupoid-compose",
                    format!(
                        "compose defined on non-composable pair ({}, {})",
                        self.morphisms[g].label, self.morphisms[f].label
                    ),
                );
            }
            if self.morphisms[gf].src != self.morphisms[f].src
                || self.morphisms[gf].dst != self.morphisms[g].dst
            {
                return fail(
                    "groupoid-compose",
                    format!(
                        "endpoints of {} ∘ {} are wrong",
                        self.morphisms[g].label, self.morphisms[f].label
                    ),
                );
            }
        }
        let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); self.objects.len()];
        for (i, m) in self.morphisms.iter().enumerate() {
            by_src[m.src].push(i);
        }
        for f in 0..nm {
            for &g in &by_src[self.morphisms[f].dst] {
                if !self.compose.contains_key(&(g, f)) {
                    return fail(
                        "groupoid-compose",
                        format!(
                            "composable pair ({}, {}) missing from table",
                            self.morphisms[g].label, self.morphisms[f].label
                        ),
                    );
                }
            }
        }
        // Unit laws.
        for f in 0..nm {
            let (s, d) = (self.morphisms[f].src, self.morphisms[f].dst);
            if self.compose(f, self.ident[s]) != Some(f) || self.compose(self.ident[d], f) != Some(f)
            {
                return fail(
                    "groupoid-unit",
                    format!("unit law fails for `{}`", self.morphisms[f].label),
                );
            }
        }
        // Associativity over all composable triples.
        for f in 0..nm {
            for &g in &by_src[self.morphisms[f].dst] {
                let gf = self.comp(g, f);
                for &h in &by_src[self.morphisms[g].dst] {
                    if self.comp(h, gf) != self.comp(self.comp(h, g), f) {
                        return fail(
                            "groupoid-associativity",
                            format!(
                                "h∘(g∘f) != (h∘g)∘f for ({}, {}, {})",
                                self.morphisms[h].label,
                                self.morphisms[g].label,
                                self.morphisms[f].label
                            ),
                        );
                    }
                }
            }
        }
        // Inverses.
        for f in 0..nm {
            let fi = self.inv[f];
            if fi >= nm
                || self.morphisms[fi].src != self.morphisms[f].dst
                || self.morphisms[fi].dst != self.morphisms[f].src
                || self.compose(fi, f) != Some(self.ident[self.morphisms[f].src])
                || self.compose(f, fi) != Some(self.ident[self.morphisms[f].dst])
            {
                return fail(
                    "groupoid-inverse",
                    format!("inverse law fails for `{}`", self.morphisms[f].label),
                );
            }
        }
        Ok(())
    }

    /// Structural equality (same labels and tables).
    pub fn same_presentation(&self, o: &FiniteGroupoid) -> bool {
        self.objects == o.objects
            && self.morphisms.len() == o.morphisms.len()
            && self
                .morphisms
                .iter()
                .zip(&o.morphisms)
                .all(|(a, b)| a.label == b.label && a.src == b.src && a.dst == b.dst)
            && self.compose == o.compose
            && self.ident == o.ident
            && self.inv == o.inv
    }

    // -- constructions -------------------------------------------------------

    /// One-object groupoid of a group; morphism index i is group element i.
    pub fn one_object(group: &FiniteGroup) -> Arc<FiniteGroupoid> {
        let n = group.order();
        let morphisms = (0..n)
            .map(|g| Mor { label: group.label(g).to_string(), src: 0, dst: 0 })
            .collect();
        let mut compose = HashMap::with_capacity(n * n);
        for g in 0..n {
            for f in 0..n {
                compose.insert((g, f), group.mul(g, f));
            }
        }
        Arc::new(FiniteGroupoid {
            name: format!("B{}", group.name),
            objects: vec!["*".into()],
            morphisms,
            compose,
            ident: vec![group.identity()],
            inv: (0..n).map(|g| group.inv(g)).collect(),
        })
    }

    /// Discrete groupoid: identities only.
    pub fn discrete(name: &str, labels: &[&str]) -> Arc<FiniteGroupoid> {
        let objects: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, l)| Mor { label: format!("id_{l}"), src: i, dst: i })
            .collect();
        let compose = (0..objects.len()).map(|i| ((i, i), i)).collect();
        Arc::new(FiniteGroupoid {
            name: name.into(),
            objects,
            morphisms,
            compose,
            ident: (0..labels.len()).collect(),
            inv: (0..labels.len()).collect(),
        })
    }

    /// Action groupoid of a left group action on a finite set.
    /// `action[g][x]` is g·x; morphism (x, g): x -> g·x, composition
    /// (y, h)∘(x, g) = (x, hg) for y = g·x.
    pub fn action_groupoid(
        name: &str,
        group: &FiniteGroup,
        points: &[String],
        action: &[Vec<usize>],
    ) -> Result<Arc<FiniteGroupoid>> {
        let (ng, nx) = (group.order(), points.len());
        if action.len() != ng || action.iter().any(|r| r.len() != nx) {
            return Err(Error::precondition("action-shape", "action must be |G| x |X|"));
        }
        for x in 0..nx {
            if action[group.identity()][x] != x {
                return Err(Error::precondition(
                    "action-identity",
                    format!("identity moves point `{}`", points[x]),
                ));
            }
        }
        for g in 0..ng {
            let mut seen = vec![false; nx];
            for x in 0..nx {
                let y = action[g][x];
                if y >= nx || seen[y] {
                    return Err(Error::precondition(
                        "action-bijective",
                        format!("element `{}` does not act bijectively", group.label(g)),
                    ));
                }
                seen[y] = true;
            }
            for h in 0..ng {
                let gh = group.mul(g, h);
                for x in 0..nx {
                    if action[g][action[h][x]] != action[gh][x] {
                        return Err(Error::precondition(
                            "action-compatible",
                            format!(
                                "g·(h·x) != (gh)·x for g={}, h={}, x={}",
                                group.label(g),
                                group.label(h),
                                points[x]
                            ),
                        ));
                    }
                }
            }
        }
        guard(nx * ng * ng, "action groupoid composition table")?;
        // Morphism index (x, g) = x * |G| + g.
        let midx = |x: usize, g: usize| x * ng + g;
        let morphisms: Vec<Mor> = (0..nx)
            .flat_map(|x| {
                (0..ng).map(move |g| (x, g)).collect::<Vec<_>>()
            })
            .map(|(x, g)| Mor {
                label: format!("{}@{}", group.label(g), points[x]),
                src: x,
                dst: action[g][x],
            })
            .collect();
        let mut compose = HashMap::with_capacity(nx * ng * ng);
        for x in 0..nx {
            for g in 0..ng {
                let y = action[g][x];
                for h in 0..ng {
                    compose.insert((midx(y, h), midx(x, g)), midx(x, group.mul(h, g)));
                }
            }
        }
        let ident = (0..nx).map(|x| midx(x, group.identity())).collect();
        let inv = (0..nx)
            .flat_map(|x| (0..ng).map(move |g| (x, g)).collect::<Vec<_>>())
            .map(|(x, g)| midx(action[g][x], group.inv(g)))
            .collect();
        Ok(Arc::new(FiniteGroupoid {
            name: name.into(),
            objects: points.to_vec(),
            morphisms,
            compose,
            ident,
            inv,
        }))
    }

    /// Product groupoid A x B. Object index (a, b) = a*|B.obj|+b,
    /// morphism index (f, g) = f*|B.mor|+g.
    pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Result<Arc<FiniteGroupoid>> {
        guard(a.compose.len() * b.compose.len(), "product composition table")?;
        let (bo, bm) = (b.objects.len(), b.morphisms.len());
        let objects = a
            .objects
            .iter()
            .flat_map(|x| b.objects.iter().map(move |y| format!("{x}|{y}")))
            .collect();
        let morphisms = a
            .morphisms
            .iter()
            .flat_map(|f| {
                b.morphisms.iter().map(move |g| Mor {
                    label: format!("{}|{}", f.label, g.label),
                    src: f.src * bo + g.src,
                    dst: f.dst * bo + g.dst,
                })
            })
            .collect();
        let mut compose = HashMap::with_capacity(a.compose.len() * b.compose.len());
        for (&(g1, f1), &c1) in &a.compose {
            for (&(g2, f2), &c2) in &b.compose {
                compose.insert((g1 * bm + g2, f1 * bm + f2), c1 * bm + c2);
            }
        }
        let ident = a
            .ident
            .iter()
            .flat_map(|&ia| b.ident.iter().map(move |&ib| ia * bm + ib))
            .collect();
        let inv = (0..a.morphisms.len())
            .flat_map(|f| (0..bm).map(move |g| (f, g)))
            .map(|(f, g)| a.inv[f] * bm + b.inv[g])
            .collect();
        Ok(Arc::new(FiniteGroupoid {
            name: format!("{}x{}", a.name, b.name),
            objects,
            morphisms,
            compose,
            ident,
            inv,
        }))
    }

    /// Disjoint union, labels prefixed to stay unique.
    pub fn disjoint_union(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Arc<FiniteGroupoid> {
        let (ao, am) = (a.objects.len(), a.morphisms.len());
        let mut objects: Vec<String> = a.objects.iter().map(|o| format!("0.{o}")).collect();
        objects.extend(b.objects.iter().map(|o| format!("1.{o}")));
        let mut morphisms: Vec<Mor> = a
            .morphisms
            .iter()
            .map(|m| Mor { label: format!("0.{}", m.label), src: m.src, dst: m.dst })
            .collect();
        morphisms.extend(b.morphisms.iter().map(|m| Mor {
            label: format!("1.{}", m.label),
            src: m.src + ao,
            dst: m.dst + ao,
        }));
        let mut compose = a.compose.clone();
        for (&(g, f), &c) in &b.compose {
            compose.insert((g + am, f + am), c + am);
        }
        let mut ident = a.ident.clone();
        ident.extend(b.ident.iter().map(|&i| i + am));
        let mut inv = a.inv.clone();
        inv.extend(b.inv.iter().map(|&i| i + am));
        Arc::new(FiniteGroupoid {
            name: format!("{}+{}", a.name, b.name),
            objects,
            morphisms,
            compose,
            ident,
            inv,
        })
    }

    /// Full subgroupoid on a set of objects, with its inclusion map.
    pub fn full_subgroupoid(
        self: &Arc<FiniteGroupoid>,
        objs: &[usize],
    ) -> (Arc<FiniteGroupoid>, GroupoidMap) {
        let obj_back: Vec<usize> = objs.to_vec();
        let mut obj_fwd: HashMap<usize, usize> = HashMap::new();
        for (i, &o) in obj_back.iter().enumerate() {
            obj_fwd.insert(o, i);
        }
        let mut mor_back = Vec::new();
        let mut mor_fwd: HashMap<usize, usize> = HashMap::new();
        for (i, m) in self.morphisms.iter().enumerate() {
            if obj_fwd.contains_key(&m.src) && obj_fwd.contains_key(&m.dst) {
                mor_fwd.insert(i, mor_back.len());
                mor_back.push(i);
            }
        }
        let morphisms = mor_back
            .iter()
            .map(|&i| {
                let m = &self.morphisms[i];
                Mor { label: m.label.clone(), src: obj_fwd[&m.src], dst: obj_fwd[&m.dst] }
            })
            .collect();
        let mut compose = HashMap::new();
        for (&(g, f), &c) in &self.compose {
            if let (Some(&g2), Some(&f2), Some(&c2)) =
                (mor_fwd.get(&g), mor_fwd.get(&f), mor_fwd.get(&c))
            {
                compose.insert((g2, f2), c2);
            }
        }
        let ident = obj_back.iter().map(|&o| mor_fwd[&self.ident[o]]).collect();
        let inv = mor_back.iter().map(|&m| mor_fwd[&self.inv[m]]).collect();
        let sub = Arc::new(FiniteGroupoid {
            name: format!("{}|sub", self.name),
            objects: obj_back.iter().map(|&o| self.objects[o].clone()).collect(),
            morphisms,
            compose,
            ident,
            inv,
        });
        let incl = GroupoidMap {
            name: format!("incl:{}", sub.name),
            dom: sub.clone(),
            cod: self.clone(),
            obj_map: obj_back,
            mor_map: mor_back,
        };
        (sub, incl)
    }
}

fn guard(entries: usize, what: &str) -> Result<()> {
    if entries > COMPOSE_GUARD {
        return Err(Error::precondition(
            "size-guard",
            format!("{what} would need {entries} entries (cap {COMPOSE_GUARD})"),
        ));
    }
    Ok(())
}

/// Builds a composition table given a rule, using a by-source index so only
/// composable pairs are visited.
pub(crate) fn build_compose_table(
    objects: usize,
    morphisms: &[Mor],
    rule: impl Fn(usize, usize) -> usize,
) -> Result<HashMap<(usize, usize), usize>> {
    let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); objects];
    for (i, m) in morphisms.iter().enumerate() {
        by_src[m.src].push(i);
    }
    let total: usize = morphisms.iter().map(|m| by_src[m.dst].len()).sum();
    guard(total, "composition table")?;
    let mut compose = HashMap::with_capacity(total);
    for f in 0..morphisms.len() {
        for &g in &by_src[morphisms[f].dst] {
            compose.insert((g, f), rule(g, f));
        }
    }
    Ok(compose)
}

// ---------------------------------------------------------------------------
// Maps and natural isomorphisms
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub struct GroupoidMap {
    pub name: String,
    pub dom: Arc<FiniteGroupoid>,
    pub cod: Arc<FiniteGroupoid>,
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl GroupoidMap {
    pub fn identity(g: &Arc<FiniteGroupoid>) -> GroupoidMap {
        GroupoidMap {
            name: format!("id_{}", g.name),
            dom: g.clone(),
            cod: g.clone(),
            obj_map: (0..g.objects.len()).collect(),
            mor_map: (0..g.morphisms.len()).collect(),
        }
    }

    /// Constant map onto one object of the codomain.
    pub fn constant(dom: &Arc<FiniteGroupoid>, cod: &Arc<FiniteGroupoid>, obj: usize) -> GroupoidMap {
        GroupoidMap {
            name: format!("const_{}", cod.objects[obj]),
            dom: dom.clone(),
            cod: cod.clone(),
            obj_map: vec![obj; dom.objects.len()],
            mor_map: vec![cod.identity_of(obj); dom.morphisms.len()],
        }
    }

    /// Map of one-object groupoids induced by a group homomorphism given as
    /// element images (`images[g]` in the codomain group).
    pub fn from_group_hom(
        dom: &Arc<FiniteGroupoid>,
        cod: &Arc<FiniteGroupoid>,
        images: &[usize],
    ) -> Result<GroupoidMap> {
        let map = GroupoidMap {
            name: "hom".into(),
            dom: dom.clone(),
            cod: cod.clone(),
            obj_map: vec![0],
            mor_map: images.to_vec(),
        };
        map.validate()?;
        Ok(map)
    }

    pub fn obj(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    pub fn mor(&self, m: usize) -> usize {
        self.mor_map[m]
    }

    /// Functor axioms: endpoints, identities, composition.
    pub fn validate(&self) -> Result<()> {
        if self.obj_map.len() != self.dom.objects.len()
            || self.mor_map.len() != self.dom.morphisms.len()
        {
            return Err(Error::precondition("functor-shape", "image vectors sized wrong"));
        }
        for (m, &im) in self.mor_map.iter().enumerate() {
            let d = &self.dom.morphisms[m];
            let c = &self.cod.morphisms[im];
            if c.src != self.obj_map[d.src] || c.dst != self.obj_map[d.dst] {
                return Err(Error::precondition(
                    "functor-endpoints",
                    format!("image of `{}` has wrong endpoints", d.label),
                ));
            }
        }
        for (x, &e) in self.dom.ident.iter().enumerate() {
            if self.mor_map[e] != self.cod.ident[self.obj_map[x]] {
                return Err(Error::precondition(
                    "functor-identity",
                    format!("identity of `{}` not preserved", self.dom.objects[x]),
                ));
            }
        }
        for (&(g, f), &gf) in self.dom.compose.iter() {
            if self.cod.compose(self.mor_map[g], self.mor_map[f]) != Some(self.mor_map[gf]) {
                return Err(Error::precondition(
                    "functor-compose",
                    format!(
                        "composition not preserved on ({}, {})",
                        self.dom.morphisms[g].label, self.dom.morphisms[f].label
                    ),
                ));
            }
        }
        Ok(())
    }

    /// outer ∘ inner.
    pub fn composed(outer: &GroupoidMap, inner: &GroupoidMap) -> GroupoidMap {
        assert!(
            Arc::ptr_eq(&inner.cod, &outer.dom) || inner.cod.same_presentation(&outer.dom),
            "maps are not composable"
        );
        GroupoidMap {
            name: format!("{}∘{}", outer.name, inner.name),
            dom: inner.dom.clone(),
            cod: outer.cod.clone(),
            obj_map: inner.obj_map.iter().map(|&x| outer.obj_map[x]).collect(),
            mor_map: inner.mor_map.iter().map(|&m| outer.mor_map[m]).collect(),
        }
    }

    /// Strict isomorphism of groupoids: bijective on objects and morphisms.
    pub fn is_strict_isomorphism(&self) -> bool {
        let mut seen_o = vec![false; self.cod.objects.len()];
        for &o in &self.obj_map {
            if seen_o[o] {
                return false;
            }
            seen_o[o] = true;
        }
        let mut seen_m = vec![false; self.cod.morphisms.len()];
        for &m in &self.mor_map {
            if seen_m[m] {
                return false;
            }
            seen_m[m] = true;
        }
        seen_o.iter().all(|&b| b) && seen_m.iter().all(|&b| b)
    }
}

/// Natural isomorphism between two maps F, G: A -> B: a morphism
/// `component[x]: F(x) -> G(x)` per object, natural in x.
#[derive(Clone, Debug)]
pub struct NatIso {
    pub components: Vec<usize>,
}

impl NatIso {
    pub fn validate(&self, f: &GroupoidMap, g: &GroupoidMap) -> Result<()> {
        if self.components.len() != f.dom.objects.len() {
            return Err(Error::precondition("nat-iso-shape", "one component per object"));
        }
        let cod = &f.cod;
        for (x, &c) in self.components.iter().enumerate() {
            if cod.src(c) != f.obj_map[x] || cod.dst(c) != g.obj_map[x] {
                return Err(Error::precondition(
                    "nat-iso-endpoints",
                    format!("component at `{}` has wrong endpoints", f.dom.objects[x]),
                ));
            }
        }
        for (m, dm) in f.dom.morphisms.iter().enumerate() {
            // component[dst] ∘ F(m) = G(m) ∘ component[src]
            let lhs = cod.comp(self.components[dm.dst], f.mor_map[m]);
            let rhs = cod.comp(g.mor_map[m], self.components[dm.src]);
            if lhs != rhs {
                return Err(Error::precondition(
                    "nat-iso-naturality",
                    format!("naturality square fails at `{}`", dm.label),
                ));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Fiber product (standard model) and equalizer
// ---------------------------------------------------------------------------

/// The standard model of the 2-categorical fiber product A x_C B:
/// objects are triples (a, b, γ: f(a) -> g(b)); a morphism
/// (a, b, γ) -> (a', b', γ') is a pair (φ: a -> a', ψ: b -> b') with
/// γ' ∘ f(φ) = g(ψ) ∘ γ.
pub struct Pullback {
    pub gpd: Arc<FiniteGroupoid>,
    pub to_left: GroupoidMap,
    pub to_right: GroupoidMap,
    /// Filling 2-isomorphism f ∘ to_left ⇒ g ∘ to_right (component at the
    /// object (a, b, γ) is γ itself).
    pub filling: NatIso,
    /// (a, b, γ) per object of `gpd`.
    pub obj_tags: Vec<(usize, usize, usize)>,
    /// (φ, ψ) per morphism of `gpd`.
    pub mor_tags: Vec<(usize, usize)>,
    /// Inverse of `obj_tags`.
    pub obj_lookup: HashMap<(usize, usize, usize), usize>,
    /// (φ, ψ, γ at source) -> morphism index.
    pub mor_lookup: HashMap<(usize, usize, usize), usize>,
}

pub fn fiber_product(f: &GroupoidMap, g: &GroupoidMap) -> Result<Pullback> {
    if !(Arc::ptr_eq(&f.cod, &g.cod) || f.cod.same_presentation(&g.cod)) {
        return Err(Error::precondition("fiber-product-cospan", "maps must share a codomain"));
    }
    let (a, b, c) = (&f.dom, &g.dom, &f.cod);
    let mut objects = Vec::new();
    let mut obj_tags = Vec::new();
    let mut obj_index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for x in 0..a.objects.len() {
        for y in 0..b.objects.len() {
            for gamma in c.hom(f.obj_map[x], g.obj_map[y]) {
                obj_index.insert((x, y, gamma), objects.len());
                objects.push(format!(
                    "({}&{}&{})",
                    a.objects[x],
                    b.objects[y],
                    c.morphisms[gamma].label
                ));
                obj_tags.push((x, y, gamma));
            }
        }
    }
    // A morphism from (src φ, src ψ, γ) is determined by (φ, ψ, γ); its
    // target component is γ' = g(ψ) ∘ γ ∘ f(φ)^{-1}.
    let mut morphisms = Vec::new();
    let mut mor_tags = Vec::new();
    let mut mor_index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for phi in 0..a.morphisms.len() {
        for psi in 0..b.morphisms.len() {
            let fs = f.obj_map[a.src(phi)];
            let gs = g.obj_map[b.src(psi)];
            for gamma in c.hom(fs, gs) {
                let gamma2 = c.comp(c.comp(g.mor_map[psi], gamma), c.inverse(f.mor_map[phi]));
                let src = obj_index[&(a.src(phi), b.src(psi), gamma)];
                let dst = obj_index[&(a.dst(phi), b.dst(psi), gamma2)];
                mor_index.insert((phi, psi, gamma), morphisms.len());
                morphisms.push(Mor {
                    label: format!(
                        "({}&{}&{})",
                        a.morphisms[phi].label,
                        b.morphisms[psi].label,
                        c.morphisms[gamma].label
                    ),
                    src,
                    dst,
                });
                mor_tags.push((phi, psi));
            }
        }
    }
    let mor_gamma: Vec<usize> = {
        let mut v = vec![0usize; morphisms.len()];
        for (&(_, _, gamma), &i) in &mor_index {
            v[i] = gamma;
        }
        v
    };
    let compose = build_compose_table(objects.len(), &morphisms, |m2, m1| {
        let (p2, s2) = mor_tags[m2];
        let (p1, s1) = mor_tags[m1];
        mor_index[&(a.comp(p2, p1), b.comp(s2, s1), mor_gamma[m1])]
    })?;
    let ident = obj_tags
        .iter()
        .map(|&(x, y, gamma)| mor_index[&(a.identity_of(x), b.identity_of(y), gamma)])
        .collect();
    let inv = (0..morphisms.len())
        .map(|m| {
            let (phi, psi) = mor_tags[m];
            let gamma2 = obj_tags[morphisms[m].dst].2;
            mor_index[&(a.inverse(phi), b.inverse(psi), gamma2)]
        })
        .collect();
    let gpd = Arc::new(FiniteGroupoid {
        name: format!("{}x_{}{}", a.name, c.name, b.name),
        objects,
        morphisms,
        compose,
        ident,
        inv,
    });
    let to_left = GroupoidMap {
        name: "pr1".into(),
        dom: gpd.clone(),
        cod: a.clone(),
        obj_map: obj_tags.iter().map(|t| t.0).collect(),
        mor_map: mor_tags.iter().map(|t| t.0).collect(),
    };
    let to_right = GroupoidMap {
        name: "pr2".into(),
        dom: gpd.clone(),
        cod: b.clone(),
        obj_map: obj_tags.iter().map(|t| t.1).collect(),
        mor_map: mor_tags.iter().map(|t| t.1).collect(),
    };
    let filling = NatIso { components: obj_tags.iter().map(|t| t.2).collect() };
    Ok(Pullback {
        gpd,
        to_left,
        to_right,
        filling,
        obj_tags,
        mor_tags,
        obj_lookup: obj_index,
        mor_lookup: mor_index,
    })
}

/// Two parallel maps are equal on the nose.
pub fn same_maps(a: &GroupoidMap, b: &GroupoidMap) -> bool {
    a.obj_map == b.obj_map && a.mor_map == b.mor_map
}

/// Every natural isomorphism f ⇒ g between parallel maps (exhaustive).
pub fn enumerate_nat_isos(f: &GroupoidMap, g: &GroupoidMap) -> Vec<NatIso> {
    let per_object: Vec<Vec<usize>> = (0..f.dom.objects.len())
        .map(|x| f.cod.hom(f.obj_map[x], g.obj_map[x]))
        .collect();
    // A naturality square can be checked as soon as components exist at both
    // endpoints; bucketing each morphism under its later endpoint lets the
    // search prune a bad partial family immediately instead of enumerating
    // every completion of it.
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); per_object.len()];
    for (m, dm) in f.dom.morphisms.iter().enumerate() {
        ready[dm.src.max(dm.dst)].push(m);
    }
    let mut out = Vec::new();
    let mut comp = Vec::with_capacity(per_object.len());
    fn rec(
        per_object: &[Vec<usize>],
        ready: &[Vec<usize>],
        comp: &mut Vec<usize>,
        f: &GroupoidMap,
        g: &GroupoidMap,
        out: &mut Vec<NatIso>,
    ) {
        if comp.len() == per_object.len() {
            // Endpoints are right by construction and every square was
            // checked on the way down, so the family is already valid.
            out.push(NatIso { components: comp.clone() });
            return;
        }
        let x = comp.len();
        'candidates: for &c in &per_object[x] {
            comp.push(c);
            for &m in &ready[x] {
                let dm = &f.dom.morphisms[m];
                let lhs = f.cod.comp(comp[dm.dst], f.mor_map[m]);
                let rhs = f.cod.comp(g.mor_map[m], comp[dm.src]);
                if lhs != rhs {
                    comp.pop();
                    continue 'candidates;
                }
            }
            rec(per_object, ready, comp, f, g, out);
            comp.pop();
        }
    }
    rec(&per_object, &ready, &mut comp, f, g, &mut out);
    out
}

/// The mediating map of a cone (p, q, θ) over the standard fiber-product
/// model: t ↦ (p(t), q(t), θ_t), m ↦ (p(m), q(m), θ at src).
pub fn mediating_map(
    pb: &Pullback,
    p: &GroupoidMap,
    q: &GroupoidMap,
    theta: &NatIso,
) -> GroupoidMap {
    let t = &p.dom;
    GroupoidMap {
        name: "mediator".into(),
        dom: t.clone(),
        cod: pb.gpd.clone(),
        obj_map: (0..t.objects.len())
            .map(|x| pb.obj_lookup[&(p.obj_map[x], q.obj_map[x], theta.components[x])])
            .collect(),
        mor_map: (0..t.morphisms.len())
            .map(|m| {
                let s = t.src(m);
                pb.mor_lookup[&(p.mor_map[m], q.mor_map[m], theta.components[s])]
            })
            .collect(),
    }
}

/// Universal property of the standard fiber-product model against a test
/// groupoid `t`, checked by exhaustive enumeration: maps `t -> P` must
/// biject with cones (p: t -> A, q: t -> B, θ: f∘p ⇒ g∘q), with the
/// mediating map realizing the inverse.
pub fn check_fiber_product_universal(
    f: &GroupoidMap,
    g: &GroupoidMap,
    t: &Arc<FiniteGroupoid>,
) -> Result<()> {
    let pb = fiber_product(f, g)?;
    // Enumerate all cones.
    let mut cones: HashMap<(Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>), usize> =
        HashMap::new();
    for p in enumerate_maps(t, &f.dom) {
        for q in enumerate_maps(t, &g.dom) {
            let fp = GroupoidMap::composed(f, &p);
            let gq = GroupoidMap::composed(g, &q);
            for theta in enumerate_nat_isos(&fp, &gq) {
                // The mediating map must be a valid map realizing the cone.
                let u = mediating_map(&pb, &p, &q, &theta);
                u.validate().map_err(|e| {
                    Error::internal(format!("mediating map is not a functor: {e}"))
                })?;
                if !same_maps(&GroupoidMap::composed(&pb.to_left, &u), &p)
                    || !same_maps(&GroupoidMap::composed(&pb.to_right, &u), &q)
                {
                    return Err(Error::internal(
                        "mediating map does not commute with projections",
                    ));
                }
                let recovered: Vec<usize> =
                    u.obj_map.iter().map(|&o| pb.filling.components[o]).collect();
                if recovered != theta.components {
                    return Err(Error::internal(
                        "mediating map does not recover the cone 2-cell",
                    ));
                }
                let key = (
                    p.obj_map.clone(),
                    p.mor_map.clone(),
                    q.obj_map.clone(),
                    q.mor_map.clone(),
                    theta.components.clone(),
                );
                cones.insert(key, 0);
            }
        }
    }
    // Every map t -> P induces a cone; the correspondence must be bijective.
    for u in enumerate_maps(t, &pb.gpd) {
        let p = GroupoidMap::composed(&pb.to_left, &u);
        let q = GroupoidMap::composed(&pb.to_right, &u);
        let theta: Vec<usize> = u.obj_map.iter().map(|&o| pb.filling.components[o]).collect();
        let key = (p.obj_map, p.mor_map, q.obj_map, q.mor_map, theta);
        match cones.get_mut(&key) {
            Some(hits) => *hits += 1,
            None => {
                return Err(Error::internal("map to the model is not a cone"));
            }
        }
    }
    if let Some((_, &hits)) = cones.iter().find(|(_, &h)| h != 1) {
        return Err(Error::internal(format!(
            "universal property fails: a cone is realized by {hits} maps into the model"
        )));
    }
    Ok(())
}

/// Equalizer object tag: x in X, y in Y, γ1: f(x) -> y, γ2: g(x) -> y.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EqObj {
    pub x: usize,
    pub y: usize,
    pub gamma1: usize,
    pub gamma2: usize,
}

/// The equalizer E(f, g), realized literally as the fiber product of
/// (f, g): X -> Y x Y against the diagonal Y -> Y x Y.
pub struct EqualizerModel {
    pub gpd: Arc<FiniteGroupoid>,
    pub to_dom: GroupoidMap,
    pub obj_tags: Vec<EqObj>,
    /// (φ in X, ψ in Y) per morphism.
    pub mor_tags: Vec<(usize, usize)>,
}

pub fn equalizer(f: &GroupoidMap, g: &GroupoidMap) -> Result<EqualizerModel> {
    if !(Arc::ptr_eq(&f.dom, &g.dom) || f.dom.same_presentation(&g.dom))
        || !(Arc::ptr_eq(&f.cod, &g.cod) || f.cod.same_presentation(&g.cod))
    {
        return Err(Error::precondition("equalizer-parallel", "maps must be parallel"));
    }
    let x = &f.dom;
    let y = &f.cod;
    let yy = FiniteGroupoid::product(y, y)?;
    let (yo, ym) = (y.objects.len(), y.morphisms.len());
    let pairing = GroupoidMap {
        name: format!("({},{})", f.name, g.name),
        dom: x.clone(),
        cod: yy.clone(),
        obj_map: (0..x.objects.len()).map(|o| f.obj_map[o] * yo + g.obj_map[o]).collect(),
        mor_map: (0..x.morphisms.len()).map(|m| f.mor_map[m] * ym + g.mor_map[m]).collect(),
    };
    let diag = GroupoidMap {
        name: "diag".into(),
        dom: y.clone(),
        cod: yy.clone(),
        obj_map: (0..yo).map(|o| o * yo + o).collect(),
        mor_map: (0..ym).map(|m| m * ym + m).collect(),
    };
    let pb = fiber_product(&pairing, &diag)?;
    let obj_tags = pb
        .obj_tags
        .iter()
        .map(|&(xo, yo_, gamma)| EqObj { x: xo, y: yo_, gamma1: gamma / ym, gamma2: gamma % ym })
        .collect();
    let mut gpd = (*pb.gpd).clone();
    gpd.name = format!("Eq({},{})", f.name, g.name);
    let gpd = Arc::new(gpd);
    let to_dom = GroupoidMap {
        name: "eq->dom".into(),
        dom: gpd.clone(),
        cod: x.clone(),
        obj_map: pb.to_left.obj_map.clone(),
        mor_map: pb.to_left.mor_map.clone(),
    };
    Ok(EqualizerModel { gpd, to_dom, obj_tags, mor_tags: pb.mor_tags })
}

// ---------------------------------------------------------------------------
// Equivalence checking
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceReport {
    Equivalence,
    NotEssentiallySurjective { object: String },
    NotFaithful { m1: String, m2: String },
    NotFull { src: String, dst: String, missing: String },
}

impl EquivalenceReport {
    pub fn is_equivalence(&self) -> bool {
        matches!(self, EquivalenceReport::Equivalence)
    }
}

impl std::fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EquivalenceReport::Equivalence => write!(f, "equivalence"),
            EquivalenceReport::NotEssentiallySurjective { object } => {
                write!(f, "not essentially surjective: object `{object}` is not reached")
            }
            EquivalenceReport::NotFaithful { m1, m2 } => {
                write!(f, "not faithful: `{m1}` and `{m2}` have equal images")
            }
            EquivalenceReport::NotFull { src, dst, missing } => {
                write!(f, "not full: `{missing}` in Hom(F({src}), F({dst})) is not hit")
            }
        }
    }
}

/// Checks essential surjectivity and full faithfulness exhaustively.
pub fn is_equivalence(f: &GroupoidMap) -> EquivalenceReport {
    let comps = f.cod.components();
    let hit: std::collections::BTreeSet<usize> =
        f.obj_map.iter().map(|&o| comps[o]).collect();
    for (y, &c) in comps.iter().enumerate() {
        if !hit.contains(&c) {
            return EquivalenceReport::NotEssentiallySurjective {
                object: f.cod.objects[y].clone(),
            };
        }
    }
    for x in 0..f.dom.objects.len() {
        for y in 0..f.dom.objects.len() {
            let dom_hom = f.dom.hom(x, y);
            let cod_hom = f.cod.hom(f.obj_map[x], f.obj_map[y]);
            let mut image: HashMap<usize, usize> = HashMap::new();
            for &m in &dom_hom {
                if let Some(&prev) = image.get(&f.mor_map[m]) {
                    return EquivalenceReport::NotFaithful {
                        m1: f.dom.morphisms[prev].label.clone(),
                        m2: f.dom.morphisms[m].label.clone(),
                    };
                }
                image.insert(f.mor_map[m], m);
            }
            for &c in &cod_hom {
                if !image.contains_key(&c) {
                    return EquivalenceReport::NotFull {
                        src: f.dom.objects[x].clone(),
                        dst: f.dom.objects[y].clone(),
                        missing: f.cod.morphisms[c].label.clone(),
                    };
                }
            }
        }
    }
    EquivalenceReport::Equivalence
}

/// Enumerates every map `dom -> cod` (exhaustive; intended for
/// desk-scale groupoids in universal-property checks).
pub fn enumerate_maps(dom: &Arc<FiniteGroupoid>, cod: &Arc<FiniteGroupoid>) -> Vec<GroupoidMap> {
    let mut out = Vec::new();
    let no = dom.objects.len();
    let mut obj_map = vec![0usize; no];
    enumerate_obj(dom, cod, 0, &mut obj_map, &mut out);
    out
}

fn enumerate_obj(
    dom: &Arc<FiniteGroupoid>,
    cod: &Arc<FiniteGroupoid>,
    at: usize,
    obj_map: &mut Vec<usize>,
    out: &mut Vec<GroupoidMap>,
) {
    if at == dom.objects.len() {
        let mut mor_map = vec![usize::MAX; dom.morphisms.len()];
        // Identities are forced.
        for (x, &e) in dom.ident.iter().enumerate() {
            mor_map[e] = cod.ident[obj_map[x]];
        }
        enumerate_mor(dom, cod, 0, obj_map, &mut mor_map, out);
        return;
    }
    for o in 0..cod.objects.len() {
        obj_map[at] = o;
        enumerate_obj(dom, cod, at + 1, obj_map, out);
    }
}

fn enumerate_mor(
    dom: &Arc<FiniteGroupoid>,
    cod: &Arc<FiniteGroupoid>,
    at: usize,
    obj_map: &Vec<usize>,
    mor_map: &mut Vec<usize>,
    out: &mut Vec<GroupoidMap>,
) {
    if at == dom.morphisms.len() {
        let cand = GroupoidMap {
            name: "enum".into(),
            dom: dom.clone(),
            cod: cod.clone(),
            obj_map: obj_map.clone(),
            mor_map: mor_map.clone(),
        };
        if cand.validate().is_ok() {
            out.push(cand);
        }
        return;
    }
    if mor_map[at] != usize::MAX {
        enumerate_mor(dom, cod, at + 1, obj_map, mor_map, out);
        return;
    }
    let m = &dom.morphisms[at];
    for im in cod.hom(obj_map[m.src], obj_map[m.dst]) {
        mor_map[at] = im;
        // Early pruning: any already-assigned composite must match.
        let mut ok = true;
        'check: for (&(g, f), &gf) in dom.compose.iter() {
            let (ig, if_, igf) = (mor_map[g], mor_map[f], mor_map[gf]);
            if ig != usize::MAX && if_ != usize::MAX && igf != usize::MAX {
                if cod.compose(ig, if_) != Some(igf) {
                    ok = false;
                    break 'check;
                }
            }
        }
        if ok {
            enumerate_mor(dom, cod, at + 1, obj_map, mor_map, out);
        }
        mor_map[at] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bz(n: usize) -> Arc<FiniteGroupoid> {
        FiniteGroupoid::one_object(&FiniteGroup::cyclic(n))
    }

    #[test]
    fn one_object_validates() {
        for g in [
            FiniteGroup::cyclic(5),
            FiniteGroup::symmetric_3(),
            FiniteGroup::quaternion_8(),
        ] {
            FiniteGroupoid::one_object(&g).validate().unwrap();
        }
    }

    #[test]
    fn action_groupoid_validates_and_rejects() {
        let z2 = FiniteGroup::cyclic(2);
        let pts = vec!["p".to_string(), "q".to_string()];
        let swap = vec![vec![0, 1], vec![1, 0]];
        let g = FiniteGroupoid::action_groupoid("swap", &z2, &pts, &swap).unwrap();
        g.validate().unwrap();
        assert_eq!(g.components(), vec![0, 0]);
        assert_eq!(g.aut(0).len(), 1); // free action: trivial isotropy

        let bad = vec![vec![0, 1], vec![0, 1]]; // non-identity acting trivially is fine...
        // ...but a non-bijective table is not.
        let worse = vec![vec![0, 1], vec![0, 0]];
        assert!(FiniteGroupoid::action_groupoid("bad", &z2, &pts, &worse).is_err());
        // `bad` is a valid (trivial) action only if it satisfies g·(h·x) = (gh)·x;
        // here 1·(1·x) = x but (1+1)·x = 0·x = x, so it validates.
        FiniteGroupoid::action_groupoid("triv", &z2, &pts, &bad).unwrap().validate().unwrap();
    }

    #[test]
    fn product_and_disjoint_union() {
        let a = bz(2);
        let b = FiniteGroupoid::discrete("D", &["u", "v"]);
        let p = FiniteGroupoid::product(&a, &b).unwrap();
        p.validate().unwrap();
        assert_eq!(p.objects.len(), 2);
        assert_eq!(p.morphisms.len(), 4);
        let u = FiniteGroupoid::disjoint_union(&a, &b);
        u.validate().unwrap();
        assert_eq!(u.components().iter().max(), Some(&2usize));
    }

    #[test]
    fn fiber_product_universal_shape() {
        // A = B = point, C = BZ2: the fiber product of the two inclusions
        // * -> BZ2 <- * has objects = Hom_C(*, *) = Z2 and is the "loop set".
        let pt = FiniteGroupoid::discrete("pt", &["*"]);
        let c = bz(2);
        let f = GroupoidMap::constant(&pt, &c, 0);
        let g = GroupoidMap::constant(&pt, &c, 0);
        let pb = fiber_product(&f, &g).unwrap();
        pb.gpd.validate().unwrap();
        assert_eq!(pb.gpd.objects.len(), 2);
        assert_eq!(pb.gpd.morphisms.len(), 2); // only identity pairs
        pb.to_left.validate().unwrap();
        pb.to_right.validate().unwrap();
        let fl = GroupoidMap::composed(&f, &pb.to_left);
        let gr = GroupoidMap::composed(&g, &pb.to_right);
        pb.filling.validate(&fl, &gr).unwrap();
    }

    #[test]
    fn equalizer_of_identity_pair_is_inertia_shape() {
        // E(id, id) on BZ3: objects are triples (*, *, (γ1, γ2)); for the
        // one-object base this is 9 objects.
        let c = bz(3);
        let id = GroupoidMap::identity(&c);
        let eq = equalizer(&id, &id).unwrap();
        eq.gpd.validate().unwrap();
        eq.to_dom.validate().unwrap();
        assert_eq!(eq.gpd.objects.len(), 9);
        // Morphisms: pairs (φ, ψ) with fixed γ at source: 3*3*9 / ... each
        // (φ, ψ, γ) distinct: 81.
        assert_eq!(eq.gpd.morphisms.len(), 81);
    }

    #[test]
    fn equivalence_detection() {
        let a = bz(4);
        let id = GroupoidMap::identity(&a);
        assert!(is_equivalence(&id).is_equivalence());

        // BZ4 -> BZ2 via reduction: full but not faithful.
        let b = bz(2);
        let red = GroupoidMap::from_group_hom(&a, &b, &[0, 1, 0, 1]).unwrap();
        assert!(matches!(is_equivalence(&red), EquivalenceReport::NotFaithful { .. }));

        // Inclusion of a point into a two-component discrete groupoid.
        let d = FiniteGroupoid::discrete("D", &["u", "v"]);
        let pt = FiniteGroupoid::discrete("pt", &["*"]);
        let incl = GroupoidMap {
            name: "incl".into(),
            dom: pt.clone(),
            cod: d.clone(),
            obj_map: vec![0],
            mor_map: vec![0],
        };
        assert!(matches!(
            is_equivalence(&incl),
            EquivalenceReport::NotEssentiallySurjective { .. }
        ));

        // Trivial group into Z2: faithful, not full.
        let t = bz(1);
        let sub = GroupoidMap::from_group_hom(&t, &b, &[0]).unwrap();
        assert!(matches!(is_equivalence(&sub), EquivalenceReport::NotFull { .. }));
    }

    #[test]
    fn enumerate_maps_counts_homs() {
        // Maps BZ2 -> BZ4 correspond to group homs Z2 -> Z4: exactly 2.
        let maps = enumerate_maps(&bz(2), &bz(4));
        assert_eq!(maps.len(), 2);
        // Maps pt -> BZ3: exactly 1.
        let pt = FiniteGroupoid::discrete("pt", &["*"]);
        assert_eq!(enumerate_maps(&pt, &bz(3)).len(), 1);
    }

    #[test]
    fn validate_catches_broken_tables() {
        let mut g = (*bz(2)).clone();
        g.inv = vec![0, 0]; // claim the generator is its own... wrong inverse
        assert!(g.validate().is_err());
        let mut h = (*bz(2)).clone();
        h.compose.insert((1, 1), 1); // 1∘1 should be 0
        assert!(h.validate().is_err());
    }
}
