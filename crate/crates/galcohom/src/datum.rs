//! The arithmetic datum: serialization schema, structural validation, and
//! builders for the worked examples.
//!
//! Schema (JSON, integers as decimal strings):
//! ```json
//! {
//!   "format": 1,
//!   "group": {"table": [[0,1],[1,0]], "labels": ["1","s"]},
//!   "module": {"invariant_factors": ["8"], "action": {"1": [["1"]], "s": [["7"]]}},
//!   "places": [{"label": "v", "kind": "finite", "stabilizer": ["1","s"]}],
//!   "field_type": "number",
//!   "arch_mode": {}
//! }
//! ```
//! Groups may instead be given by permutation generators; modules may be
//! given by an explicit presentation (`ngens` + `relations` as columns).

use crate::abelian::FinAbGroup;
use crate::gmodule::GammaModule;
use crate::group::{FiniteGroup, Subgroup};
use crate::matrix::IntMatrix;
use crate::places::{build_phi, PlaceKind, PlaceMap, PlaceOrbit, PlaceSet};
use crate::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum FieldType {
    #[serde(rename = "number")]
    Number,
    #[serde(rename = "function")]
    Function,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ArchModeSpec {
    Named(String),
    UserSupplied { elements: usize, base: usize, psi: Vec<Vec<String>> },
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub format: u32,
    pub group: GroupSpec,
    pub module: ModuleSpec,
    pub places: Vec<PlaceSpec>,
    pub field_type: FieldType,
    #[serde(default)]
    pub arch_mode: BTreeMap<String, ArchModeSpec>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutations: Option<PermSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct PermSpec {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_factors: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ngens: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<Vec<String>>>,
    /// element label (or decimal index) → action matrix, rows of decimal strings
    pub action: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct PlaceSpec {
    pub label: String,
    pub kind: String,
    pub stabilizer: Vec<String>,
}

/// The fully constructed, internally validated datum.
pub struct ArithmeticDatum {
    pub group: Arc<FiniteGroup>,
    pub module: GammaModule,
    pub places: PlaceSet,
    pub field_type: FieldType,
    pub arch_mode: BTreeMap<String, ArchModeSpec>,
    /// builder metadata: predicted order of Sha², for the test harness
    pub predicted_sha2_order: Option<BigInt>,
}

fn parse_big(path: &str, s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|e| Error::Parse { path: path.into(), message: e.to_string() })
}

fn element_by_name(g: &FiniteGroup, name: &str, path: &str) -> Result<usize> {
    if let Some(i) = g.element_by_label(name) {
        return Ok(i);
    }
    if let Ok(i) = name.parse::<usize>() {
        if i < g.order() {
            return Ok(i);
        }
    }
    Err(Error::Parse { path: path.into(), message: format!("unknown group element '{}'", name) })
}

pub fn parse_datum(text: &str) -> Result<ArithmeticDatum> {
    let file: DatumFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse { path: "$".into(), message: e.to_string() })?;
    datum_from_file(&file)
}

pub fn datum_from_file(file: &DatumFile) -> Result<ArithmeticDatum> {
    if file.format != 1 {
        return Err(Error::Parse {
            path: "format".into(),
            message: format!("unsupported format {}", file.format),
        });
    }
    // group
    let group = match (&file.group.table, &file.group.permutations) {
        (Some(t), None) => Arc::new(
            FiniteGroup::from_table(t.clone(), file.group.labels.clone()).map_err(|e| {
                Error::Parse { path: "group.table".into(), message: e.to_string() }
            })?,
        ),
        (None, Some(p)) => {
            let g = FiniteGroup::from_permutations(p.degree, &p.generators).map_err(|e| {
                Error::Parse { path: "group.permutations".into(), message: e.to_string() }
            })?;
            g
        }
        _ => {
            return Err(Error::Parse {
                path: "group".into(),
                message: "exactly one of table/permutations required".into(),
            })
        }
    };
    // module underlying group
    let underlying = match (&file.module.invariant_factors, &file.module.ngens) {
        (Some(fs), None) => {
            let mut factors = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                factors.push(parse_big(&format!("module.invariant_factors[{}]", i), f)?);
            }
            Arc::new(FinAbGroup::from_invariant_factors(&factors))
        }
        (None, Some(n)) => {
            let rels = file.module.relations.clone().unwrap_or_default();
            let mut cols = Vec::new();
            for (j, col) in rels.iter().enumerate() {
                if col.len() != *n {
                    return Err(Error::Parse {
                        path: format!("module.relations[{}]", j),
                        message: format!("relation column must have {} entries", n),
                    });
                }
                let mut c = Vec::new();
                for (i, v) in col.iter().enumerate() {
                    c.push(parse_big(&format!("module.relations[{}][{}]", j, i), v)?);
                }
                cols.push(c);
            }
            Arc::new(FinAbGroup::new(*n, IntMatrix::from_columns(*n, &cols)))
        }
        _ => {
            return Err(Error::Parse {
                path: "module".into(),
                message: "exactly one of invariant_factors/ngens required".into(),
            })
        }
    };
    // action matrices
    let n = underlying.ngens();
    let mut action = vec![None; group.order()];
    for (name, rows) in &file.module.action {
        let idx = element_by_name(&group, name, "module.action")?;
        if rows.len() != n {
            return Err(Error::Parse {
                path: format!("module.action.{}", name),
                message: format!("matrix must have {} rows", n),
            });
        }
        let mut m = IntMatrix::zero(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse {
                    path: format!("module.action.{}[{}]", name, i),
                    message: format!("row must have {} entries", n),
                });
            }
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, parse_big(&format!("module.action.{}[{}][{}]", name, i, j), v)?);
            }
        }
        action[idx] = Some(m);
    }
    let action: Vec<IntMatrix> = action
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            a.ok_or_else(|| Error::Parse {
                path: "module.action".into(),
                message: format!("missing action matrix for element '{}'", group.label(i)),
            })
        })
        .collect::<Result<_>>()?;
    let module = GammaModule::new(group.clone(), underlying, action).map_err(|e| Error::Parse {
        path: "module.action".into(),
        message: e.to_string(),
    })?;
    // places
    let mut orbits = Vec::new();
    for (i, p) in file.places.iter().enumerate() {
        let kind = match p.kind.as_str() {
            "finite" => PlaceKind::Finite,
            "real" => PlaceKind::Real,
            "complex" => PlaceKind::Complex,
            other => {
                return Err(Error::Parse {
                    path: format!("places[{}].kind", i),
                    message: format!("unknown kind '{}'", other),
                })
            }
        };
        let mut elems = Vec::new();
        for s in &p.stabilizer {
            elems.push(element_by_name(&group, s, &format!("places[{}].stabilizer", i))?);
        }
        let sub = Subgroup::new(group.clone(), elems).map_err(|_| Error::Parse {
            path: format!("places[{}].stabilizer", i),
            message: "not a subgroup".into(),
        })?;
        orbits.push(PlaceOrbit::new(p.label.clone(), kind, sub).map_err(|e| Error::Parse {
            path: format!("places[{}]", i),
            message: e.to_string(),
        })?);
    }
    let places = PlaceSet::new(group.clone(), orbits).map_err(|e| Error::Parse {
        path: "places".into(),
        message: e.to_string(),
    })?;
    // structural invariants
    if file.field_type == FieldType::Function {
        for o in places.orbits() {
            if o.kind != PlaceKind::Finite {
                return Err(Error::Parse {
                    path: "field_type".into(),
                    message: format!(
                        "function-field datum cannot contain archimedean orbit '{}'",
                        o.label
                    ),
                });
            }
        }
    }
    for (label, _) in &file.arch_mode {
        let known = places
            .orbits()
            .iter()
            .any(|o| &o.label == label && o.kind == PlaceKind::Real);
        if !known {
            return Err(Error::Parse {
                path: format!("arch_mode.{}", label),
                message: "arch_mode keys must name real orbits".into(),
            });
        }
    }
    Ok(ArithmeticDatum {
        group,
        module,
        places,
        field_type: file.field_type,
        arch_mode: file.arch_mode.clone(),
        predicted_sha2_order: None,
    })
}

/// Serialize a datum back to the canonical JSON form.
pub fn serialize_datum(d: &ArithmeticDatum) -> String {
    let file = to_file(d);
    serde_json::to_string_pretty(&file).expect("serialization cannot fail") + "\n"
}

pub fn to_file(d: &ArithmeticDatum) -> DatumFile {
    let g = &d.group;
    let table: Vec<Vec<usize>> =
        (0..g.order()).map(|i| (0..g.order()).map(|j| g.mul(i, j)).collect()).collect();
    let mut action = BTreeMap::new();
    for e in g.elements() {
        let m = d.module.action_matrix(e);
        let rows: Vec<Vec<String>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
            .collect();
        action.insert(g.label(e).to_string(), rows);
    }
    // Prefer the invariant-factor form when the presentation is canonical.
    let underlying = d.module.underlying();
    let canonical: Vec<BigInt> = underlying
        .canonical_generators()
        .iter()
        .map(|(f, _)| f.clone())
        .collect();
    let is_canonical_presentation = {
        let expect = FinAbGroup::from_invariant_factors(&canonical);
        expect.ngens() == underlying.ngens() && &expect == underlying.as_ref()
    };
    let module = if is_canonical_presentation {
        ModuleSpec {
            invariant_factors: Some(canonical.iter().map(|f| f.to_string()).collect()),
            ngens: None,
            relations: None,
            action,
        }
    } else {
        ModuleSpec {
            invariant_factors: None,
            ngens: Some(underlying.ngens()),
            relations: Some(
                underlying
                    .relations()
                    .columns()
                    .map(|c| c.iter().map(|v| v.to_string()).collect())
                    .collect(),
            ),
            action,
        }
    };
    let places = d
        .places
        .orbits()
        .iter()
        .map(|o| PlaceSpec {
            label: o.label.clone(),
            kind: match o.kind {
                PlaceKind::Finite => "finite".into(),
                PlaceKind::Real => "real".into(),
                PlaceKind::Complex => "complex".into(),
            },
            stabilizer: o.stabilizer().elements().iter().map(|&e| g.label(e).to_string()).collect(),
        })
        .collect();
    DatumFile {
        format: 1,
        group: GroupSpec { table: Some(table), permutations: None, labels: Some(g.labels().to_vec()) },
        module,
        places,
        field_type: d.field_type,
        arch_mode: d.arch_mode.clone(),
    }
}

/// Validation report (coverage, archimedean placement, φ existence).
pub struct ValidationReport {
    /// one entry per conjugacy class of cyclic subgroups:
    /// (class description, orbit labels whose stabilizer covers a conjugate)
    pub coverage: Vec<(String, Vec<String>)>,
    pub uncovered: Vec<String>,
    pub arch_messages: Vec<String>,
    /// witness φ from the cyclic classes into the places, when covered
    pub phi_witness: Option<PlaceMap>,
    pub empty_places: bool,
}

impl ValidationReport {
    pub fn covered(&self) -> bool {
        self.uncovered.is_empty() && !self.empty_places
    }
}

pub fn validate_datum(d: &ArithmeticDatum) -> ValidationReport {
    let classes = d.group.cyclic_subgroups_up_to_conjugacy();
    let mut coverage = Vec::new();
    let mut uncovered = Vec::new();
    for c in &classes {
        let mut covering = Vec::new();
        for o in d.places.orbits() {
            if o.stabilizer().contains_conjugate_of(c).is_some() {
                covering.push(o.label.clone());
            }
        }
        if covering.is_empty() {
            uncovered.push(c.describe());
        }
        coverage.push((c.describe(), covering));
    }
    let mut arch_messages = Vec::new();
    for o in d.places.orbits() {
        if o.kind == PlaceKind::Real && o.stabilizer().order() > 2 {
            arch_messages.push(format!("real orbit {} has stabilizer order > 2", o.label));
        }
        if o.kind == PlaceKind::Real
            && !d.arch_mode.contains_key(&o.label)
            && d.field_type == FieldType::Number
        {
            // default mode applies; only note it
        }
    }
    let phi_witness = if uncovered.is_empty() && d.places.place_count() > 0 {
        // virtual complement: one orbit per cyclic class
        let virt: Result<Vec<PlaceOrbit>> = classes
            .iter()
            .enumerate()
            .map(|(i, c)| PlaceOrbit::new(format!("class{}", i), PlaceKind::Finite, c.clone()))
            .collect();
        match virt.and_then(|orbits| PlaceSet::new(d.group.clone(), orbits)) {
            Ok(vset) => build_phi(&vset, &d.places).ok(),
            Err(_) => None,
        }
    } else {
        None
    };
    ValidationReport {
        coverage,
        uncovered,
        arch_messages,
        phi_witness,
        empty_places: d.places.place_count() == 0,
    }
}

/// The Q(√7), E = F(ζ₈) datum: Γ = (Z/8)^× acting on M = Z/8 by
/// multiplication (obtained as the Q/Z-dual of μ₈), three size-2 orbits
/// with stabilizers <3>, <5>, <7>, the last flagged real.
pub fn builder_paper_example() -> ArithmeticDatum {
    // (Z/8)^× = {1,3,5,7} under multiplication mod 8
    let units = [1usize, 3, 5, 7];
    let table: Vec<Vec<usize>> = units
        .iter()
        .map(|&a| units.iter().map(|&b| units.iter().position(|&c| c == a * b % 8).unwrap()).collect())
        .collect();
    let labels: Vec<String> = units.iter().map(|u| u.to_string()).collect();
    let group = Arc::new(FiniteGroup::from_table(table, Some(labels)).unwrap());
    // μ₈ ≅ Z/8 with ā·x = ax; M = Hom(μ₈, Q/Z) via the Q/Z dual
    let mu8 = GammaModule::from_character(group.clone(), 8, &[1, 3, 5, 7]).unwrap();
    let module = mu8.qz_dual().expect("μ₈ is finite");
    let stab = |a: usize| group.generated_subgroup(&[group.element_by_label(&a.to_string()).unwrap()]);
    let orbits = vec![
        PlaceOrbit::new("v3".into(), PlaceKind::Finite, stab(3)).unwrap(),
        PlaceOrbit::new("v5".into(), PlaceKind::Finite, stab(5)).unwrap(),
        PlaceOrbit::new("v7".into(), PlaceKind::Real, stab(7)).unwrap(),
    ];
    let places = PlaceSet::new(group.clone(), orbits).unwrap();
    let mut arch = BTreeMap::new();
    arch.insert("v7".to_string(), ArchModeSpec::Named("abelianized-default".into()));
    ArithmeticDatum {
        group,
        module,
        places,
        field_type: FieldType::Number,
        arch_mode: arch,
        predicted_sha2_order: None,
    }
}

/// The norm-one quotient torus T = R_{E/F}G_m / G_m: M = Z[Γ]/⟨Σγ⟩ with the
/// regular action, one finite orbit per requested decomposition class, plus
/// coverage orbits for every cyclic class and one archimedean orbit with
/// trivial stabilizer. Predicted Sha² order n / lcm(n_v) attached.
pub fn builder_sansuc_torus(group: Arc<FiniteGroup>, classes: &[Subgroup]) -> ArithmeticDatum {
    let module = GammaModule::regular_mod_norm(group.clone());
    let mut orbits = Vec::new();
    let mut lcm: usize = 1;
    for (i, c) in classes.iter().enumerate() {
        orbits.push(
            PlaceOrbit::new(format!("d{}", i), PlaceKind::Finite, c.clone()).unwrap(),
        );
        lcm = num_integer::lcm(lcm, c.order());
    }
    for (i, c) in group.cyclic_subgroups_up_to_conjugacy().into_iter().enumerate() {
        let dup = orbits.iter().any(|o| o.stabilizer() == &c);
        lcm = num_integer::lcm(lcm, c.order());
        if !dup {
            orbits.push(PlaceOrbit::new(format!("c{}", i), PlaceKind::Finite, c).unwrap());
        }
    }
    orbits.push(
        PlaceOrbit::new("infty".into(), PlaceKind::Real, group.trivial_subgroup()).unwrap(),
    );
    let places = PlaceSet::new(group.clone(), orbits).unwrap();
    let predicted = BigInt::from(group.order() / lcm);
    ArithmeticDatum {
        group,
        module,
        places,
        field_type: FieldType::Number,
        arch_mode: BTreeMap::new(),
        predicted_sha2_order: Some(predicted),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::torsion_part;
    use crate::places::induced_module;

    #[test]
    fn minimal_datum_parses() {
        let text = r#"{
            "format": 1,
            "group": {"table": [[0]], "labels": ["1"]},
            "module": {"invariant_factors": [], "action": {"1": []}},
            "places": [{"label": "v", "kind": "finite", "stabilizer": ["1"]}],
            "field_type": "number"
        }"#;
        let d = parse_datum(text).unwrap();
        assert!(d.module.underlying().is_trivial());
        assert_eq!(d.places.place_count(), 1);
    }

    #[test]
    fn broken_associativity_reported_with_path() {
        let text = r#"{
            "format": 1,
            "group": {"table": [[0,1],[1,1]]},
            "module": {"invariant_factors": [], "action": {}},
            "places": [],
            "field_type": "number"
        }"#;
        match parse_datum(text) {
            Err(Error::Parse { path, message }) => {
                assert_eq!(path, "group.table");
                assert!(message.contains("associativity") || message.contains("inverse"), "{}", message);
            }
            other => panic!("expected parse error, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{
            "format": 1,
            "group": {"table": [[0]]},
            "module": {"invariant_factors": [], "action": {}},
            "places": [],
            "field_type": "number",
            "surprise": true
        }"#;
        assert!(parse_datum(text).is_err());
    }

    #[test]
    fn ill_defined_action_rejected() {
        // 2 is not an automorphism of Z/4
        let text = r#"{
            "format": 1,
            "group": {"table": [[0,1],[1,0]], "labels": ["1","s"]},
            "module": {"invariant_factors": ["4"], "action": {"1": [["1"]], "s": [["2"]]}},
            "places": [],
            "field_type": "number"
        }"#;
        match parse_datum(text) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "module.action"),
            _ => panic!("expected action validation error"),
        }
    }

    #[test]
    fn function_field_forbids_real_orbits() {
        let text = r#"{
            "format": 1,
            "group": {"table": [[0,1],[1,0]], "labels": ["1","s"]},
            "module": {"invariant_factors": ["4"], "action": {"1": [["1"]], "s": [["3"]]}},
            "places": [{"label": "w", "kind": "real", "stabilizer": ["1","s"]}],
            "field_type": "function"
        }"#;
        assert!(parse_datum(text).is_err());
    }

    #[test]
    fn paper_example_builds_and_validates() {
        let d = builder_paper_example();
        let rep = validate_datum(&d);
        assert!(rep.covered(), "uncovered: {:?}", rep.uncovered);
        assert!(rep.phi_witness.is_some());
        // M = Z/8, action of 3,5,7 as multiplication
        assert_eq!(d.module.underlying().invariant_factors(), vec![BigInt::from(8)]);
        // coverage list mentions all four cyclic classes
        assert_eq!(rep.coverage.len(), 4);
    }

    #[test]
    fn paper_example_coinvariants() {
        // (M[S_E]₀)_Γ ≅ Z/2 ⊕ Z/8
        let d = builder_paper_example();
        let ind = induced_module(&d.module, &d.places).unwrap();
        let (co, _) = ind.ms0.coinvariants();
        assert_eq!(co.invariant_factors(), vec![BigInt::from(2), BigInt::from(8)]);
        assert_eq!(co.free_rank(), 0);
        let (tors, _) = torsion_part(&co);
        assert_eq!(tors.order(), Some(BigInt::from(16)));
    }

    #[test]
    fn round_trip_is_stable() {
        let d = builder_paper_example();
        let s1 = serialize_datum(&d);
        let d2 = parse_datum(&s1).unwrap();
        let s2 = serialize_datum(&d2);
        assert_eq!(s1, s2);
    }

    #[test]
    fn klein_only_partial_coverage_is_reported() {
        let g = FiniteGroup::klein_four();
        let orbit = PlaceOrbit::new("a".into(), PlaceKind::Finite, g.generated_subgroup(&[1]))
            .unwrap();
        let d = ArithmeticDatum {
            group: g.clone(),
            module: GammaModule::trivial_action(g.clone(), Arc::new(FinAbGroup::cyclic(2))),
            places: PlaceSet::new(g.clone(), vec![orbit]).unwrap(),
            field_type: FieldType::Number,
            arch_mode: BTreeMap::new(),
            predicted_sha2_order: None,
        };
        let rep = validate_datum(&d);
        assert!(!rep.covered());
        assert_eq!(rep.uncovered.len(), 2); // the two other order-2 classes
    }

    #[test]
    fn sansuc_builder_metadata() {
        let g = FiniteGroup::klein_four();
        let classes =
            vec![g.generated_subgroup(&[1]), g.generated_subgroup(&[2]), g.generated_subgroup(&[3])];
        let d = builder_sansuc_torus(g.clone(), &classes);
        assert_eq!(d.predicted_sha2_order, Some(BigInt::from(2)));
        assert!(validate_datum(&d).covered());
        // including the full group pushes l to n
        let d2 = builder_sansuc_torus(g.clone(), &[g.full_subgroup()]);
        assert_eq!(d2.predicted_sha2_order, Some(BigInt::from(1)));
        // cyclic group: always trivial
        let c4 = FiniteGroup::cyclic(4);
        let d3 = builder_sansuc_torus(c4.clone(), &[c4.generated_subgroup(&[2])]);
        assert_eq!(d3.predicted_sha2_order, Some(BigInt::from(1)));
    }
}
