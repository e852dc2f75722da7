//! Versioned JSON interchange documents.
//!
//! Every document is a JSON object, optionally self-describing through a
//! `"schema"` field. Parsing is structural: any shape violation produces
//! [`Error::Schema`] carrying a JSON-pointer path to the offending value.
//! Semantic validation (associativity, cocycle conditions, regularity) is
//! delegated to the constructors of the target types and surfaces as
//! [`Error::Precondition`].
//!
//! Emission is deterministic: keys are sorted (the underlying map is a
//! `BTreeMap`), collections are emitted in canonical index order, and
//! fractions are always rendered as reduced `"p/q"` strings, so equal data
//! serializes to byte-identical text.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};

use crate::coc::{BundleCocycle, Gerbe};
use crate::deloc::GammaComplex;
use crate::error::{Error, Result};
use crate::gpd::{FiniteGroup, FiniteGroupoid, Mor};
use crate::qmodz::QmodZ;
use crate::simp::SimplicialComplex;
use crate::zcomplex::LocalSystem;

pub const GROUPOID_V1: &str = "groupoid.v1";
pub const GROUP_V1: &str = "group.v1";
pub const COCHAIN_V1: &str = "cochain.v1";
pub const COCHAIN3_V1: &str = "cochain3.v1";
pub const GCOMPLEX_V1: &str = "gcomplex.v1";
pub const SCOMPLEX_V1: &str = "scomplex.v1";
pub const LOOP_META_V1: &str = "loop-meta.v1";

/// Resolves a name used in place of an inline document (a built-in).
pub type GroupResolver<'a> = &'a dyn Fn(&str) -> Option<FiniteGroup>;
pub type GroupoidResolver<'a> = &'a dyn Fn(&str) -> Option<Arc<FiniteGroupoid>>;

// ---------------------------------------------------------------------------
// Path-tracked reader
// ---------------------------------------------------------------------------

/// A cursor into a JSON value that carries its pointer path, so every
/// error names the exact location. Documents are desk-scale, so the path
/// allocations are irrelevant and the code stays obvious.
#[derive(Clone)]
pub struct Cur<'a> {
    value: &'a Value,
    path: String,
}

impl<'a> Cur<'a> {
    pub fn root(value: &'a Value) -> Cur<'a> {
        Cur { value, path: String::new() }
    }

    fn pointer(&self) -> String {
        if self.path.is_empty() {
            "/".to_string()
        } else {
            self.path.clone()
        }
    }

    pub fn fail(&self, detail: impl Into<String>) -> Error {
        Error::schema(self.pointer(), detail)
    }

    fn child(&self, segment: &str, value: &'a Value) -> Cur<'a> {
        // JSON-pointer escaping for the two special characters.
        let seg = segment.replace('~', "~0").replace('/', "~1");
        Cur { value, path: format!("{}/{}", self.path, seg) }
    }

    pub fn as_object(&self) -> Result<&'a Map<String, Value>> {
        self.value.as_object().ok_or_else(|| self.fail("expected an object"))
    }

    /// Rejects keys outside the allowed set (catches misspelled fields).
    pub fn only_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.as_object()?.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(self
                    .child(key, self.value)
                    .fail(format!("unknown field (expected one of: {})", allowed.join(", "))));
            }
        }
        Ok(())
    }

    /// Optional `"schema"` tag: if present it must match.
    pub fn check_schema_tag(&self, expected: &str) -> Result<()> {
        if let Some(tag) = self.opt("schema") {
            let got = tag.str()?;
            if got != expected {
                return Err(tag.fail(format!("expected schema `{expected}`, found `{got}`")));
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Result<Cur<'a>> {
        match self.as_object()?.get(key) {
            Some(v) => Ok(self.child(key, v)),
            None => Err(self.fail(format!("missing required field `{key}`"))),
        }
    }

    pub fn opt(&self, key: &str) -> Option<Cur<'a>> {
        self.value.as_object().and_then(|m| m.get(key)).map(|v| self.child(key, v))
    }

    pub fn str(&self) -> Result<&'a str> {
        self.value.as_str().ok_or_else(|| self.fail("expected a string"))
    }

    pub fn array(&self) -> Result<Vec<Cur<'a>>> {
        let items = self.value.as_array().ok_or_else(|| self.fail("expected an array"))?;
        Ok(items.iter().enumerate().map(|(i, v)| self.child(&i.to_string(), v)).collect())
    }

    /// Entries of an object in key-sorted order (the map is a BTreeMap).
    pub fn entries(&self) -> Result<Vec<(&'a str, Cur<'a>)>> {
        Ok(self.as_object()?.iter().map(|(k, v)| (k.as_str(), self.child(k, v))).collect())
    }

    pub fn usize(&self) -> Result<usize> {
        self.value
            .as_u64()
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| self.fail("expected a nonnegative integer"))
    }

    pub fn index_below(&self, n: usize, what: &str) -> Result<usize> {
        let i = self.usize()?;
        if i >= n {
            return Err(self.fail(format!("{what} index {i} out of range (< {n})")));
        }
        Ok(i)
    }

    /// A fraction: either a JSON integer or a string `"p/q"`.
    pub fn qmodz(&self) -> Result<QmodZ> {
        if let Some(i) = self.value.as_i64() {
            return Ok(QmodZ::new(i, 1));
        }
        let s = self
            .value
            .as_str()
            .ok_or_else(|| self.fail("expected an integer or a fraction string \"p/q\""))?;
        QmodZ::parse(s).map_err(|e| match e {
            Error::Schema { detail, .. } => self.fail(detail),
            other => other,
        })
    }

    /// A rational: either a JSON integer or a string `"p/q"` (arbitrary
    /// precision, may be negative or improper).
    pub fn rational(&self) -> Result<BigRational> {
        if let Some(i) = self.value.as_i64() {
            return Ok(BigRational::from(BigInt::from(i)));
        }
        let s = self
            .value
            .as_str()
            .ok_or_else(|| self.fail("expected an integer or a fraction string \"p/q\""))?;
        let parsed: BigRational = s
            .trim()
            .parse()
            .map_err(|_| self.fail(format!("not a rational number: `{s}`")))?;
        Ok(parsed)
    }
}

// ---------------------------------------------------------------------------
// groupoid.v1
// ---------------------------------------------------------------------------

/// Parses a `groupoid.v1` document and validates the result.
pub fn parse_groupoid(doc: &Value) -> Result<Arc<FiniteGroupoid>> {
    let root = Cur::root(doc);
    root.only_keys(&["schema", "name", "objects", "morphisms", "compose", "ident", "inv"])?;
    root.check_schema_tag(GROUPOID_V1)?;
    let name = match root.opt("name") {
        Some(n) => n.str()?.to_string(),
        None => "groupoid".to_string(),
    };

    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    for item in root.get("objects")?.array()? {
        let label = item.str()?.to_string();
        if obj_index.insert(label.clone(), objects.len()).is_some() {
            return Err(item.fail(format!("duplicate object label `{label}`")));
        }
        objects.push(label);
    }

    let mut morphisms = Vec::new();
    let mut mor_index = HashMap::new();
    for item in root.get("morphisms")?.array()? {
        item.only_keys(&["id", "src", "dst"])?;
        let id = item.get("id")?.str()?.to_string();
        if mor_index.insert(id.clone(), morphisms.len()).is_some() {
            return Err(item.get("id")?.fail(format!("duplicate morphism id `{id}`")));
        }
        let src_cur = item.get("src")?;
        let src = *obj_index
            .get(src_cur.str()?)
            .ok_or_else(|| src_cur.fail(format!("unknown object `{}`", src_cur.str().unwrap())))?;
        let dst_cur = item.get("dst")?;
        let dst = *obj_index
            .get(dst_cur.str()?)
            .ok_or_else(|| dst_cur.fail(format!("unknown object `{}`", dst_cur.str().unwrap())))?;
        morphisms.push(Mor { label: id, src, dst });
    }
    let mor_of = |cur: &Cur| -> Result<usize> {
        let id = cur.str()?;
        mor_index.get(id).copied().ok_or_else(|| cur.fail(format!("unknown morphism `{id}`")))
    };

    let mut compose = HashMap::new();
    for item in root.get("compose")?.array()? {
        let triple = item.array()?;
        if triple.len() != 3 {
            return Err(item.fail("expected a triple [g, f, g∘f] of morphism ids"));
        }
        let g = mor_of(&triple[0])?;
        let f = mor_of(&triple[1])?;
        let gf = mor_of(&triple[2])?;
        if morphisms[f].dst != morphisms[g].src {
            return Err(item.fail(format!(
                "`{}` and `{}` are not composable (dst(f) must equal src(g))",
                morphisms[g].label, morphisms[f].label
            )));
        }
        if compose.insert((g, f), gf).is_some() {
            return Err(item.fail(format!(
                "duplicate composition entry for ({}, {})",
                morphisms[g].label, morphisms[f].label
            )));
        }
    }

    let ident_cur = root.get("ident")?;
    let mut ident = vec![usize::MAX; objects.len()];
    for (key, val) in ident_cur.entries()? {
        let x = *obj_index
            .get(key)
            .ok_or_else(|| ident_cur.child(key, val.value).fail("unknown object"))?;
        ident[x] = mor_of(&val)?;
    }
    if let Some(x) = ident.iter().position(|&m| m == usize::MAX) {
        return Err(ident_cur.fail(format!("missing identity for object `{}`", objects[x])));
    }

    let inv_cur = root.get("inv")?;
    let mut inv = vec![usize::MAX; morphisms.len()];
    for (key, val) in inv_cur.entries()? {
        let m = *mor_index
            .get(key)
            .ok_or_else(|| inv_cur.child(key, val.value).fail("unknown morphism"))?;
        inv[m] = mor_of(&val)?;
    }
    if let Some(m) = inv.iter().position(|&v| v == usize::MAX) {
        return Err(inv_cur.fail(format!("missing inverse for morphism `{}`", morphisms[m].label)));
    }

    let gpd = FiniteGroupoid::from_parts(name, objects, morphisms, compose, ident, inv);
    gpd.validate()?;
    Ok(Arc::new(gpd))
}

/// Morphism ids for emission: labels when they are unique and nonempty,
/// otherwise synthesized `m0..mN`.
fn emission_ids(labels: impl Iterator<Item = String> + Clone, prefix: &str) -> Vec<String> {
    let mut seen = HashSet::new();
    let unique = labels.clone().all(|l| !l.is_empty() && seen.insert(l));
    if unique {
        labels.collect()
    } else {
        (0..labels.count()).map(|i| format!("{prefix}{i}")).collect()
    }
}

/// Emits a `groupoid.v1` document; parsing it back yields the same
/// presentation.
pub fn emit_groupoid(g: &FiniteGroupoid) -> Value {
    let obj_ids = emission_ids(g.objects.iter().cloned(), "o");
    let mor_ids = emission_ids(g.morphisms.iter().map(|m| m.label.clone()), "m");
    let morphisms: Vec<Value> = g
        .morphisms
        .iter()
        .enumerate()
        .map(|(i, m)| {
            json!({ "id": mor_ids[i], "src": obj_ids[m.src], "dst": obj_ids[m.dst] })
        })
        .collect();
    let mut triples: Vec<(usize, usize, usize)> =
        g.composable_pairs().map(|(gm, fm, gf)| (gm, fm, gf)).collect();
    triples.sort_unstable();
    let compose: Vec<Value> = triples
        .iter()
        .map(|&(gm, fm, gf)| json!([mor_ids[gm], mor_ids[fm], mor_ids[gf]]))
        .collect();
    let ident: Map<String, Value> = (0..g.object_count())
        .map(|x| (obj_ids[x].clone(), Value::from(mor_ids[g.identity_of(x)].clone())))
        .collect();
    let inv: Map<String, Value> = (0..g.morphism_count())
        .map(|m| (mor_ids[m].clone(), Value::from(mor_ids[g.inverse(m)].clone())))
        .collect();
    json!({
        "schema": GROUPOID_V1,
        "name": g.name,
        "objects": obj_ids,
        "morphisms": morphisms,
        "compose": compose,
        "ident": ident,
        "inv": inv,
    })
}

// ---------------------------------------------------------------------------
// group.v1
// ---------------------------------------------------------------------------

/// Parses a `group.v1` document (elements plus Cayley table of element
/// indices, row `a` column `b` holding `a·b`).
pub fn parse_group(doc: &Value) -> Result<FiniteGroup> {
    let root = Cur::root(doc);
    root.only_keys(&["schema", "name", "elements", "table"])?;
    root.check_schema_tag(GROUP_V1)?;
    let name = match root.opt("name") {
        Some(n) => n.str()?.to_string(),
        None => "group".to_string(),
    };
    let mut elements = Vec::new();
    let mut seen = HashSet::new();
    for item in root.get("elements")?.array()? {
        let label = item.str()?.to_string();
        if !seen.insert(label.clone()) {
            return Err(item.fail(format!("duplicate element label `{label}`")));
        }
        elements.push(label);
    }
    let n = elements.len();
    let rows = root.get("table")?.array()?;
    if rows.len() != n {
        return Err(root.get("table")?.fail(format!("expected {n} rows, found {}", rows.len())));
    }
    let mut table = Vec::with_capacity(n);
    for row in rows {
        let cells = row.array()?;
        if cells.len() != n {
            return Err(row.fail(format!("expected {n} entries, found {}", cells.len())));
        }
        let mut out = Vec::with_capacity(n);
        for cell in cells {
            out.push(cell.index_below(n, "element")?);
        }
        table.push(out);
    }
    FiniteGroup::from_table(&name, elements, table)
}

pub fn emit_group(g: &FiniteGroup) -> Value {
    let n = g.order();
    let elements: Vec<&str> = (0..n).map(|i| g.label(i)).collect();
    let table: Vec<Vec<usize>> =
        (0..n).map(|a| (0..n).map(|b| g.mul(a, b)).collect()).collect();
    json!({
        "schema": GROUP_V1,
        "name": g.name,
        "elements": elements,
        "table": table,
    })
}

// ---------------------------------------------------------------------------
// cochain.v1 — nerve cochains on a groupoid (degree 1 or 2)
// ---------------------------------------------------------------------------

pub enum CochainValues {
    /// Degree 1: one value per morphism (omitted entries are zero).
    One(Vec<QmodZ>),
    /// Degree 2: values on composable pairs (g, f).
    Two(HashMap<(usize, usize), QmodZ>),
}

pub struct CochainDoc {
    pub gpd: Arc<FiniteGroupoid>,
    pub values: CochainValues,
}

impl CochainDoc {
    pub fn degree(&self) -> usize {
        match self.values {
            CochainValues::One(_) => 1,
            CochainValues::Two(_) => 2,
        }
    }

    /// Interprets a degree-1 document as a bundle cocycle.
    pub fn into_bundle(self) -> Result<BundleCocycle> {
        match self.values {
            CochainValues::One(values) => BundleCocycle::new(&self.gpd, values),
            CochainValues::Two(_) => Err(Error::precondition(
                "cochain-degree",
                "a degree-1 cochain is required, this document has degree 2",
            )),
        }
    }

    /// Interprets a degree-2 document as a gerbe cocycle.
    pub fn into_gerbe(self) -> Result<Gerbe> {
        match self.values {
            CochainValues::Two(values) => Gerbe::new(&self.gpd, values),
            CochainValues::One(_) => Err(Error::precondition(
                "cochain-degree",
                "a degree-2 cochain is required, this document has degree 1",
            )),
        }
    }
}

/// Parses a `cochain.v1` document. The base is referenced by exactly one
/// of the fields `groupoid` / `group`, each either an inline document or a
/// built-in name resolved through the supplied lookup functions.
pub fn parse_cochain(
    doc: &Value,
    groups: GroupResolver,
    groupoids: GroupoidResolver,
) -> Result<CochainDoc> {
    let root = Cur::root(doc);
    root.only_keys(&["schema", "groupoid", "group", "degree", "entries"])?;
    root.check_schema_tag(COCHAIN_V1)?;

    let gpd = match (root.opt("groupoid"), root.opt("group")) {
        (Some(gc), None) => match gc.value {
            Value::String(name) => groupoids(name)
                .ok_or_else(|| gc.fail(format!("unknown built-in groupoid `{name}`")))?,
            _ => parse_groupoid(gc.value).map_err(|e| reroot(e, &gc))?,
        },
        (None, Some(gc)) => {
            let group = match gc.value {
                Value::String(name) => groups(name)
                    .ok_or_else(|| gc.fail(format!("unknown built-in group `{name}`")))?,
                _ => parse_group(gc.value).map_err(|e| reroot(e, &gc))?,
            };
            FiniteGroupoid::one_object(&group)
        }
        (None, None) => return Err(root.fail("one of `groupoid` or `group` is required")),
        (Some(_), Some(_)) => {
            return Err(root.fail("fields `groupoid` and `group` are mutually exclusive"))
        }
    };

    let degree = root.get("degree")?.usize()?;
    let mor_of = |cur: &Cur| -> Result<usize> {
        let id = cur.str()?;
        gpd.morphism_index(id).ok_or_else(|| cur.fail(format!("unknown morphism `{id}`")))
    };
    match degree {
        1 => {
            let mut values = vec![QmodZ::ZERO; gpd.morphism_count()];
            let mut seen = HashSet::new();
            for item in root.get("entries")?.array()? {
                item.only_keys(&["args", "value"])?;
                let args = item.get("args")?.array()?;
                if args.len() != 1 {
                    return Err(item.get("args")?.fail("a degree-1 entry takes one morphism"));
                }
                let m = mor_of(&args[0])?;
                if !seen.insert(m) {
                    return Err(item.fail("duplicate entry for this morphism"));
                }
                values[m] = item.get("value")?.qmodz()?;
            }
            Ok(CochainDoc { gpd, values: CochainValues::One(values) })
        }
        2 => {
            let mut values = HashMap::new();
            for item in root.get("entries")?.array()? {
                item.only_keys(&["args", "value"])?;
                let args = item.get("args")?.array()?;
                if args.len() != 2 {
                    return Err(item
                        .get("args")?
                        .fail("a degree-2 entry takes two composable morphisms [g, f]"));
                }
                let g = mor_of(&args[0])?;
                let f = mor_of(&args[1])?;
                if gpd.compose(g, f).is_none() {
                    return Err(item.get("args")?.fail("the two morphisms are not composable"));
                }
                if values.insert((g, f), item.get("value")?.qmodz()?).is_some() {
                    return Err(item.fail("duplicate entry for this pair"));
                }
            }
            Ok(CochainDoc { gpd, values: CochainValues::Two(values) })
        }
        other => Err(root.get("degree")?.fail(format!("degree must be 1 or 2, found {other}"))),
    }
}

/// Prefixes pointer paths of a nested document with its field location.
fn reroot(e: Error, at: &Cur) -> Error {
    match e {
        Error::Schema { path, detail } => {
            let suffix = if path == "/" { String::new() } else { path };
            Error::schema(format!("{}{}", at.pointer(), suffix), detail)
        }
        other => other,
    }
}

// ---------------------------------------------------------------------------
// scomplex.v1 — ordered simplicial complexes
// ---------------------------------------------------------------------------

/// Shared shape for the complex part of `scomplex.v1` / `gcomplex.v1`:
/// vertex labels plus top simplices as strictly increasing index tuples.
fn parse_complex_fields(root: &Cur) -> Result<SimplicialComplex> {
    let mut vertices = Vec::new();
    let mut seen = HashSet::new();
    for item in root.get("vertices")?.array()? {
        let label = item.str()?.to_string();
        if !seen.insert(label.clone()) {
            return Err(item.fail(format!("duplicate vertex label `{label}`")));
        }
        vertices.push(label);
    }
    let n = vertices.len();
    let mut gens = Vec::new();
    for item in root.get("simplices")?.array()? {
        let cells = item.array()?;
        if cells.is_empty() {
            return Err(item.fail("a simplex needs at least one vertex"));
        }
        let mut tuple = Vec::with_capacity(cells.len());
        for cell in &cells {
            tuple.push(cell.index_below(n, "vertex")?);
        }
        if !tuple.windows(2).all(|w| w[0] < w[1]) {
            return Err(item.fail("vertex indices must be strictly increasing"));
        }
        gens.push(tuple);
    }
    SimplicialComplex::from_simplices(vertices, &gens)
}

pub fn parse_scomplex(doc: &Value) -> Result<SimplicialComplex> {
    let root = Cur::root(doc);
    root.only_keys(&["schema", "name", "vertices", "simplices"])?;
    root.check_schema_tag(SCOMPLEX_V1)?;
    parse_complex_fields(&root)
}

pub fn emit_scomplex(kx: &SimplicialComplex) -> Value {
    // Top simplices only; faces are implied.
    let mut tops: Vec<&Vec<usize>> = Vec::new();
    for d in (0..=kx.dim()).rev() {
        for s in &kx.simplices[d] {
            let is_face = tops.iter().any(|t| s.iter().all(|v| t.contains(v)));
            if !is_face {
                tops.push(s);
            }
        }
    }
    tops.sort();
    json!({
        "schema": SCOMPLEX_V1,
        "vertices": kx.vertices,
        "simplices": tops,
    })
}

// ---------------------------------------------------------------------------
// gcomplex.v1 — a complex with a group action
// ---------------------------------------------------------------------------

pub fn parse_gcomplex(doc: &Value, groups: GroupResolver) -> Result<GammaComplex> {
    let root = Cur::root(doc);
    root.only_keys(&["schema", "name", "vertices", "simplices", "group", "action"])?;
    root.check_schema_tag(GCOMPLEX_V1)?;
    let name = match root.opt("name") {
        Some(n) => n.str()?.to_string(),
        None => "gcomplex".to_string(),
    };
    let complex = parse_complex_fields(&root)?;
    let n = complex.vertex_count();

    let gc = root.get("group")?;
    let group = match gc.value {
        Value::String(gname) => {
            groups(gname).ok_or_else(|| gc.fail(format!("unknown built-in group `{gname}`")))?
        }
        _ => parse_group(gc.value).map_err(|e| reroot(e, &gc))?,
    };

    let action_cur = root.get("action")?;
    let mut action: Vec<Option<Vec<usize>>> = vec![None; group.order()];
    for (key, val) in action_cur.entries()? {
        let g = group
            .index_of(key)
            .ok_or_else(|| action_cur.child(key, val.value).fail("unknown group element"))?;
        let cells = val.array()?;
        if cells.len() != n {
            return Err(val.fail(format!("expected a permutation of {n} vertices")));
        }
        let mut perm = Vec::with_capacity(n);
        let mut hit = vec![false; n];
        for cell in &cells {
            let v = cell.index_below(n, "vertex")?;
            if hit[v] {
                return Err(cell.fail(format!("vertex {v} appears twice (not a permutation)")));
            }
            hit[v] = true;
            perm.push(v);
        }
        action[g] = Some(perm);
    }
    if let Some(g) = action.iter().position(|p| p.is_none()) {
        return Err(action_cur.fail(format!("missing entry for element `{}`", group.label(g))));
    }
    GammaComplex::new(name, group, complex, action.into_iter().map(|p| p.unwrap()).collect())
}

pub fn emit_gcomplex(kx: &GammaComplex) -> Value {
    let base = emit_scomplex(&kx.complex);
    let action: Map<String, Value> = (0..kx.group.order())
        .map(|g| (kx.group.label(g).to_string(), json!(kx.action[g])))
        .collect();
    json!({
        "schema": GCOMPLEX_V1,
        "name": kx.name,
        "vertices": base["vertices"],
        "simplices": base["simplices"],
        "group": emit_group(&kx.group),
        "action": action,
    })
}

// ---------------------------------------------------------------------------
// cochain3.v1 — rational 3-cochains on a simplicial complex
// ---------------------------------------------------------------------------

/// Parses a `cochain3.v1` document against a complex: entries assign a
/// rational value to 3-simplices (omitted entries are zero).
pub fn parse_cochain3(doc: &Value, kx: &SimplicialComplex) -> Result<Vec<BigRational>> {
    let root = Cur::root(doc);
    root.only_keys(&["schema", "degree", "entries"])?;
    root.check_schema_tag(COCHAIN3_V1)?;
    if let Some(d) = root.opt("degree") {
        if d.usize()? != 3 {
            return Err(d.fail("degree must be 3"));
        }
    }
    let n = kx.vertex_count();
    let mut values = vec![BigRational::from(BigInt::from(0)); kx.size(3)];
    let mut seen = HashSet::new();
    for item in root.get("entries")?.array()? {
        item.only_keys(&["simplex", "value"])?;
        let scur = item.get("simplex")?;
        let cells = scur.array()?;
        if cells.len() != 4 {
            return Err(scur.fail("a 3-simplex has exactly 4 vertices"));
        }
        let mut tuple = Vec::with_capacity(4);
        for cell in &cells {
            tuple.push(cell.index_below(n, "vertex")?);
        }
        if !tuple.windows(2).all(|w| w[0] < w[1]) {
            return Err(scur.fail("vertex indices must be strictly increasing"));
        }
        let idx = kx
            .index_of(3, &tuple)
            .ok_or_else(|| scur.fail("not a 3-simplex of the complex"))?;
        if !seen.insert(idx) {
            return Err(item.fail("duplicate entry for this simplex"));
        }
        values[idx] = item.get("value")?.rational()?;
    }
    Ok(values)
}

/// Parses the optional flat local-system document for the z-complex: a
/// 1-cochain with fraction values on the edges of the complex.
pub fn parse_local_system(doc: &Value, kx: &SimplicialComplex) -> Result<LocalSystem> {
    let root = Cur::root(doc);
    root.only_keys(&["schema", "degree", "entries"])?;
    if let Some(d) = root.opt("degree") {
        if d.usize()? != 1 {
            return Err(d.fail("degree must be 1"));
        }
    }
    let n = kx.vertex_count();
    let mut theta = vec![QmodZ::ZERO; kx.size(1)];
    let mut seen = HashSet::new();
    for item in root.get("entries")?.array()? {
        item.only_keys(&["simplex", "value"])?;
        let scur = item.get("simplex")?;
        let cells = scur.array()?;
        if cells.len() != 2 {
            return Err(scur.fail("an edge has exactly 2 vertices"));
        }
        let a = cells[0].index_below(n, "vertex")?;
        let b = cells[1].index_below(n, "vertex")?;
        if a >= b {
            return Err(scur.fail("vertex indices must be strictly increasing"));
        }
        let idx =
            kx.index_of(1, &[a, b]).ok_or_else(|| scur.fail("not an edge of the complex"))?;
        if !seen.insert(idx) {
            return Err(item.fail("duplicate entry for this edge"));
        }
        theta[idx] = item.get("value")?.qmodz()?;
    }
    LocalSystem::new(kx, theta)
}

// ---------------------------------------------------------------------------
// Canonical rendering
// ---------------------------------------------------------------------------

/// Canonical fraction rendering: always `"p/q"`, reduced, positive
/// denominator (integers render as `"p/1"`).
pub fn frac(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}/1", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serializes with sorted keys and a trailing newline; equal values yield
/// byte-identical text.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loops::loop_groupoid;

    fn bz3() -> Arc<FiniteGroupoid> {
        FiniteGroupoid::one_object(&FiniteGroup::cyclic(3))
    }

    #[test]
    fn groupoid_documents_round_trip() {
        for gpd in [
            bz3(),
            FiniteGroupoid::one_object(&FiniteGroup::symmetric_3()),
            loop_groupoid(&bz3()).unwrap().gpd,
            FiniteGroupoid::discrete("d2", &["a", "b"]),
        ] {
            let doc = emit_groupoid(&gpd);
            let back = parse_groupoid(&doc).unwrap();
            assert!(gpd.same_presentation(&back), "round trip changed {}", gpd.name);
            assert_eq!(canonical_json(&doc), canonical_json(&emit_groupoid(&back)));
        }
    }

    #[test]
    fn group_documents_round_trip() {
        for g in [FiniteGroup::cyclic(6), FiniteGroup::quaternion_8()] {
            let doc = emit_group(&g);
            let back = parse_group(&doc).unwrap();
            assert_eq!(back.order(), g.order());
            for a in 0..g.order() {
                for b in 0..g.order() {
                    assert_eq!(back.mul(a, b), g.mul(a, b));
                }
            }
        }
    }

    #[test]
    fn schema_errors_carry_pointer_paths() {
        let mut doc = emit_groupoid(&bz3());
        doc["morphisms"][1]["src"] = json!("nowhere");
        let err = parse_groupoid(&doc).unwrap_err();
        match err {
            Error::Schema { path, .. } => assert_eq!(path, "/morphisms/1/src"),
            other => panic!("expected a schema error, got {other}"),
        }

        let err = parse_group(&json!({
            "elements": ["e", "g"],
            "table": [[0, 1], [1, 2]],
        }))
        .unwrap_err();
        match err {
            Error::Schema { path, .. } => assert_eq!(path, "/table/1/1"),
            other => panic!("expected a schema error, got {other}"),
        }

        let err = parse_groupoid(&json!({"objects": [], "morphisms": [], "compse": []}))
            .unwrap_err();
        match err {
            Error::Schema { path, .. } => assert_eq!(path, "/compse"),
            other => panic!("expected a schema error, got {other}"),
        }
    }

    #[test]
    fn semantic_failures_are_named_preconditions() {
        // Structurally fine, semantically broken: g1 has no inverse entry
        // that squares to the identity (inv table lies).
        let doc = json!({
            "schema": GROUPOID_V1,
            "objects": ["x"],
            "morphisms": [
                {"id": "e", "src": "x", "dst": "x"},
                {"id": "g", "src": "x", "dst": "x"},
                {"id": "h", "src": "x", "dst": "x"},
            ],
            "compose": [
                ["e", "e", "e"], ["e", "g", "g"], ["e", "h", "h"],
                ["g", "e", "g"], ["g", "g", "h"], ["g", "h", "e"],
                ["h", "e", "h"], ["h", "g", "e"], ["h", "h", "g"],
            ],
            "ident": {"x": "e"},
            "inv": {"e": "e", "g": "g", "h": "h"},
        });
        match parse_groupoid(&doc).unwrap_err() {
            Error::Precondition { .. } => {}
            other => panic!("expected a precondition failure, got {other}"),
        }
    }

    #[test]
    fn cochain_documents_resolve_their_base() {
        let no_groups = |_: &str| None;
        let groupoids = |name: &str| (name == "BZ4").then(bz4);
        fn bz4() -> Arc<FiniteGroupoid> {
            FiniteGroupoid::one_object(&FiniteGroup::cyclic(4))
        }
        let doc = json!({
            "schema": COCHAIN_V1,
            "groupoid": "BZ4",
            "degree": 1,
            "entries": [
                {"args": ["1"], "value": "1/4"},
                {"args": ["2"], "value": "1/2"},
                {"args": ["3"], "value": "3/4"},
            ],
        });
        let parsed = parse_cochain(&doc, &no_groups, &groupoids).unwrap();
        let bundle = parsed.into_bundle().unwrap();
        assert_eq!(bundle.values[1], QmodZ::new(1, 4));

        // Degree mismatch is a precondition, not a schema error.
        let parsed = parse_cochain(&doc, &no_groups, &groupoids).unwrap();
        match parsed.into_gerbe().unwrap_err() {
            Error::Precondition { name, .. } => assert_eq!(name, "cochain-degree"),
            other => panic!("expected a precondition failure, got {other}"),
        }

        // Inline group base, degree 2, entries on non-composable pairs are
        // impossible on a one-object groupoid, so check unknown ids instead.
        let doc = json!({
            "group": {"elements": ["e", "g"], "table": [[0, 1], [1, 0]]},
            "degree": 2,
            "entries": [{"args": ["g", "nope"], "value": 0}],
        });
        match parse_cochain(&doc, &no_groups, &groupoids) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "/entries/0/args/1"),
            Err(other) => panic!("expected a schema error, got {other}"),
            Ok(_) => panic!("expected a schema error"),
        }
    }

    #[test]
    fn complex_documents_round_trip_through_top_simplices() {
        for kx in [
            SimplicialComplex::point(),
            SimplicialComplex::interval(),
            SimplicialComplex::sphere_boundary(2),
            SimplicialComplex::torus_seven(),
        ] {
            let doc = emit_scomplex(&kx);
            let back = parse_scomplex(&doc).unwrap();
            assert_eq!(back.counts(), kx.counts());
            assert_eq!(back.vertices, kx.vertices);
        }
    }

    #[test]
    fn twist_documents_validate_against_the_complex() {
        let s3 = SimplicialComplex::sphere_boundary(3);
        let doc = json!({
            "schema": COCHAIN3_V1,
            "entries": [{"simplex": [0, 1, 2, 3], "value": "3/2"}],
        });
        let lam = parse_cochain3(&doc, &s3).unwrap();
        assert_eq!(lam[s3.index_of(3, &[0, 1, 2, 3]).unwrap()], "3/2".parse().unwrap());
        assert_eq!(lam.iter().filter(|v| !num_traits::Zero::is_zero(*v)).count(), 1);

        let bad = json!({"entries": [{"simplex": [0, 1, 2, 5], "value": 1}]});
        match parse_cochain3(&bad, &s3).unwrap_err() {
            Error::Schema { path, .. } => assert_eq!(path, "/entries/0/simplex/3"),
            other => panic!("expected a schema error, got {other}"),
        }
    }

    #[test]
    fn canonical_rendering_is_stable() {
        assert_eq!(frac(&"-3/6".parse().unwrap()), "-1/2");
        assert_eq!(frac(&"4/2".parse().unwrap()), "2/1");
        let v = json!({"b": 1, "a": [1, 2]});
        assert_eq!(canonical_json(&v), "{\n  \"a\": [\n    1,\n    2\n  ],\n  \"b\": 1\n}\n");
    }
}
