//! The on-disk JSON shape of a presentation bundle.
//!
//! Scalars are strings (`"-3/4"` over the rationals, residues over a prime
//! field). Graded data is keyed by decimal degree strings. Omitted table
//! entries are zero.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "dgcat-bundle/1";

pub type Row = Vec<String>;
/// Keyed by decimal degree.
pub type Graded<T> = IndexMap<String, T>;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub format: String,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub categories: IndexMap<String, CategoryFile>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub functors: IndexMap<String, FunctorFile>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub modules: IndexMap<String, ModuleFile>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub bimodules: IndexMap<String, BimoduleFile>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub subcategories: IndexMap<String, SubcategoryFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteDirective>,
}

/// A complex: basis labels per degree and the differential block from each
/// degree `k` to `k + 1` as rows.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq, Default)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub basis: Graded<Vec<String>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub differential: Graded<Vec<Row>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub source: String,
    pub target: String,
    pub basis: Graded<Vec<String>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub differential: Graded<Vec<Row>>,
}

/// `left ∘ right = result` for `right ∈ hom(source, middle)` and
/// `left ∈ hom(middle, target)`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CompositionBlock {
    pub source: String,
    pub middle: String,
    pub target: String,
    pub entries: Vec<(String, String, Row)>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    #[serde(default)]
    pub homs: Vec<HomFile>,
    pub identities: IndexMap<String, Row>,
    #[serde(default)]
    pub composition: Vec<CompositionBlock>,
}

/// A flat matrix between total coordinates.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct HomMatrix {
    pub source: String,
    pub target: String,
    pub matrix: Vec<Row>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    pub source: String,
    pub target: String,
    pub objects: IndexMap<String, String>,
    #[serde(default)]
    pub homs: Vec<HomMatrix>,
}

/// The action of basis morphism `morphism: source → target` as a matrix
/// `M(source) → M(target)`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub source: String,
    pub target: String,
    pub morphism: String,
    pub matrix: Vec<Row>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub category: String,
    #[serde(default)]
    pub values: IndexMap<String, ComplexFile>,
    #[serde(default)]
    pub actions: Vec<ActionFile>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PairValue {
    pub first: String,
    pub second: String,
    pub basis: Graded<Vec<String>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub differential: Graded<Vec<Row>>,
}

/// A one-sided action on `T(−, at)` or `T(at, −)`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PartialAction {
    pub source: String,
    pub target: String,
    pub morphism: String,
    pub at: String,
    pub matrix: Vec<Row>,
}

/// A module over `first ⊗ second`, given by its two partial actions.
/// Category references are names, optionally suffixed with `^op`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BimoduleFile {
    pub first: String,
    pub second: String,
    #[serde(default)]
    pub values: Vec<PairValue>,
    #[serde(default)]
    pub first_actions: Vec<PartialAction>,
    #[serde(default)]
    pub second_actions: Vec<PartialAction>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SubcategoryFile {
    pub category: String,
    pub objects: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq, Default)]
#[serde(deny_unknown_fields)]
pub struct SuiteDirective {
    pub suite: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcategory: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodule: Option<String>,
    /// Number of random instances, for suites that generate them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl SuiteDirective {
    /// `suite(key=value, ...)` for the fields that are set.
    pub fn label(&self) -> String {
        let fields = [
            ("category", &self.category),
            ("subcategory", &self.subcategory),
            ("functor", &self.functor),
            ("module", &self.module),
            ("bimodule", &self.bimodule),
        ];
        let mut parts: Vec<String> = fields
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| format!("{k}={v}")))
            .collect();
        if let Some(n) = self.count {
            parts.push(format!("count={n}"));
        }
        format!("{}({})", self.suite, parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_list_set_fields() {
        let d = SuiteDirective {
            suite: "kan".into(),
            functor: Some("f".into()),
            count: Some(2),
            ..SuiteDirective::default()
        };
        assert_eq!(d.label(), "kan(functor=f, count=2)");
    }
}
