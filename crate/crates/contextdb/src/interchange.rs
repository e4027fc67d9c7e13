//! The JSON interchange format for models and schemas.
//!
//! A model document is a single UTF-8 JSON object:
//!
//! ```json
//! {
//!   "semiring": "probability",
//!   "distributions": true,
//!   "attributes": [ { "name": "a", "domain": ["0", "1"] }, … ],
//!   "contexts": [ ["a", "b"], ["a'", "b"], … ],
//!   "tables": [
//!     { "context": ["a", "b"],
//!       "rows": [ { "tuple": {"a": "0", "b": "0"}, "value": "1/2" }, … ] },
//!     …
//!   ]
//! }
//! ```
//!
//! Values are strings: `"0"`/`"1"` for the Boolean semiring, `"p/q"` or
//! integer strings for probabilities (decimal literals like `"0.375"` are
//! accepted on input and converted exactly), and additionally `"inf"` for
//! min-plus. Rows omitted from a table carry value zero. The
//! `"distributions"` flag decides whether tables are required to sum to
//! one. Tables may appear in any order — each is matched to a declared
//! context by its attribute set — but every context needs exactly one.
//!
//! A schema document is the same object with `"tables"` (and `"semiring"`,
//! `"distributions"`) omitted. [`parse_schema`] also accepts a full model
//! document and reads just its schema part.
//!
//! Serialization is canonical: attributes sorted by name, contexts in
//! declaration order, rows in canonical tuple order, values rendered in
//! lowest terms — so `parse ∘ serialize` is the identity and equal models
//! serialize identically.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::EmpiricalModel;
use crate::quantum::FloatModel;
use crate::schema::{Attribute, AttributeSet, DataValue, Schema, Tuple};
use crate::semiring::SemiringKind;
use crate::valuation::Valuation;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttributeDoc {
    name: String,
    domain: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDoc {
    tuple: BTreeMap<String, String>,
    value: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    context: Vec<String>,
    rows: Vec<RowDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    semiring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    distributions: Option<bool>,
    attributes: Vec<AttributeDoc>,
    contexts: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tables: Option<Vec<TableDoc>>,
}

fn parse_doc(text: &str) -> Result<ModelDoc> {
    serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))
}

/// Build the schema part shared by models and schema-only documents.
fn schema_of_doc(doc: &ModelDoc) -> Result<Schema> {
    let mut domains: BTreeMap<Attribute, Vec<DataValue>> = BTreeMap::new();
    for attr in &doc.attributes {
        let name = Attribute::new(attr.name.clone());
        if domains.contains_key(&name) {
            return Err(Error::DuplicateAttribute(attr.name.clone()));
        }
        domains.insert(name, attr.domain.iter().map(DataValue::new).collect());
    }
    let mut contexts = Vec::with_capacity(doc.contexts.len());
    for names in &doc.contexts {
        for name in names {
            if !domains.contains_key(&Attribute::new(name.clone())) {
                return Err(Error::UnknownAttribute(name.clone()));
            }
        }
        contexts.push(AttributeSet::from_names(names.iter()));
    }
    Schema::new(contexts, domains)
}

/// Parse a schema document (or the schema part of a model document).
pub fn parse_schema(text: &str) -> Result<Schema> {
    schema_of_doc(&parse_doc(text)?)
}

/// Parse a full model document.
pub fn parse_model(text: &str) -> Result<EmpiricalModel> {
    let doc = parse_doc(text)?;
    let schema = schema_of_doc(&doc)?;
    let kind = match &doc.semiring {
        Some(name) => SemiringKind::from_name(name)?,
        None => {
            return Err(Error::Syntax(
                "a model document needs a top-level \"semiring\"".to_string(),
            ))
        }
    };
    let Some(table_docs) = &doc.tables else {
        return Err(Error::Syntax(
            "a model document needs a \"tables\" array".to_string(),
        ));
    };

    // Match each table to a declared context by attribute set.
    let mut by_context: BTreeMap<&AttributeSet, &TableDoc> = BTreeMap::new();
    for table in table_docs {
        for name in &table.context {
            if schema.domains().keys().all(|a| a.name() != name) {
                return Err(Error::UnknownAttribute(name.clone()));
            }
        }
        let set = AttributeSet::from_names(table.context.iter());
        let Some(declared) = schema.contexts().iter().find(|c| **c == set) else {
            return Err(Error::Syntax(format!(
                "table for {set} does not match any declared context"
            )));
        };
        if by_context.insert(declared, table).is_some() {
            return Err(Error::DuplicateContext(set.to_string()));
        }
    }

    let mut tables = Vec::with_capacity(schema.contexts().len());
    for context in schema.contexts() {
        let Some(table) = by_context.get(context) else {
            return Err(Error::Syntax(format!("context {context} has no table")));
        };
        let mut entries = Vec::with_capacity(table.rows.len());
        for row in &table.rows {
            let mut pairs = Vec::with_capacity(row.tuple.len());
            for (name, token) in &row.tuple {
                let attr = Attribute::new(name.clone());
                if !schema.domains().contains_key(&attr) {
                    return Err(Error::UnknownAttribute(name.clone()));
                }
                pairs.push((attr, DataValue::new(token)));
            }
            let tuple = Tuple::new(pairs)?;
            if tuple.attributes() != *context {
                return Err(Error::Syntax(format!(
                    "row {tuple} does not cover context {context} exactly"
                )));
            }
            entries.push((tuple, kind.parse_value(&row.value)?));
        }
        tables.push(Valuation::over(&schema, context, kind, entries)?);
    }
    EmpiricalModel::new(schema, tables, doc.distributions.unwrap_or(false))
}

fn attribute_docs(schema: &Schema) -> Vec<AttributeDoc> {
    schema
        .domains()
        .iter()
        .map(|(attr, domain)| AttributeDoc {
            name: attr.name().to_string(),
            domain: domain.iter().map(|v| v.token().to_string()).collect(),
        })
        .collect()
}

fn context_docs(schema: &Schema) -> Vec<Vec<String>> {
    schema
        .contexts()
        .iter()
        .map(|c| c.iter().map(|a| a.name().to_string()).collect())
        .collect()
}

fn render_doc(doc: &ModelDoc) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize infallibly");
    text.push('\n');
    text
}

/// Serialize a model canonically.
pub fn serialize_model(model: &EmpiricalModel) -> String {
    let tables = model
        .schema()
        .contexts()
        .iter()
        .zip(model.tables())
        .map(|(context, table)| TableDoc {
            context: context.iter().map(|a| a.name().to_string()).collect(),
            rows: table
                .iter()
                .map(|(tuple, value)| RowDoc {
                    tuple: tuple
                        .iter()
                        .map(|(a, v)| (a.name().to_string(), v.token().to_string()))
                        .collect(),
                    value: value.render(),
                })
                .collect(),
        })
        .collect();
    render_doc(&ModelDoc {
        semiring: Some(model.kind().name().to_string()),
        distributions: Some(model.distributions()),
        attributes: attribute_docs(model.schema()),
        contexts: context_docs(model.schema()),
        tables: Some(tables),
    })
}

/// Serialize just a schema (no semiring, no tables).
pub fn serialize_schema(schema: &Schema) -> String {
    render_doc(&ModelDoc {
        semiring: None,
        distributions: None,
        attributes: attribute_docs(schema),
        contexts: context_docs(schema),
        tables: None,
    })
}

/// Serialize a float model, rendering each value as the shortest decimal
/// that round-trips to the same float. The flag is always
/// `"distributions": false`: float tables sum to one only approximately,
/// and re-parsing treats the decimals as exact rationals.
pub fn serialize_float_model(model: &FloatModel) -> String {
    let tables = model
        .schema()
        .contexts()
        .iter()
        .zip(model.tables())
        .map(|(context, table)| TableDoc {
            context: context.iter().map(|a| a.name().to_string()).collect(),
            rows: table
                .iter()
                .filter(|(_, &p)| p != 0.0)
                .map(|(tuple, &p)| RowDoc {
                    tuple: tuple
                        .iter()
                        .map(|(a, v)| (a.name().to_string(), v.token().to_string()))
                        .collect(),
                    value: format!("{p}"),
                })
                .collect(),
        })
        .collect();
    render_doc(&ModelDoc {
        semiring: Some(SemiringKind::Probability.name().to_string()),
        distributions: Some(false),
        attributes: attribute_docs(model.schema()),
        contexts: context_docs(model.schema()),
        tables: Some(tables),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{bell_model, ghz_model, hardy_model, ks18_schema, triangle_schema};
    use crate::quantum::{born_model, calibrated_bell_scenario, bell_state};
    use crate::semiring::{rat, Tropical, Value};
    use crate::structure::{generate_compatible_instance, one_in_k_instance};

    fn minplus_model() -> EmpiricalModel {
        let schema = Schema::uniform(&[&["a", "b"]], &["0", "1"]).unwrap();
        let table = Valuation::over(
            &schema,
            &schema.contexts()[0],
            SemiringKind::MinPlus,
            [
                (
                    Tuple::from_pairs([("a", "0"), ("b", "0")]).unwrap(),
                    Value::Tropical(Tropical::Finite(rat(0, 1))),
                ),
                (
                    Tuple::from_pairs([("a", "1"), ("b", "1")]).unwrap(),
                    Value::Tropical(Tropical::Finite(rat(3, 2))),
                ),
            ],
        )
        .unwrap();
        EmpiricalModel::new(schema, vec![table], false).unwrap()
    }

    #[test]
    fn round_trip_is_identity_on_the_builtins() {
        let chain = Schema::uniform(&[&["a", "b"], &["b", "c"]], &["0", "1"]).unwrap();
        let models = [
            bell_model(),
            hardy_model(),
            ghz_model(3).unwrap(),
            one_in_k_instance(&ks18_schema()).unwrap(),
            generate_compatible_instance(&chain, 5).unwrap(),
            minplus_model(),
        ];
        for model in &models {
            let text = serialize_model(model);
            let back = parse_model(&text).unwrap();
            assert_eq!(&back, model);
            // Canonical serialization: a second round trip gives identical text.
            assert_eq!(serialize_model(&back), text);
        }
    }

    #[test]
    fn schema_round_trip_and_model_documents_as_schema_sources() {
        for schema in [ks18_schema(), triangle_schema()] {
            let text = serialize_schema(&schema);
            assert_eq!(parse_schema(&text).unwrap(), schema);
        }
        let from_model = parse_schema(&serialize_model(&bell_model())).unwrap();
        assert_eq!(&from_model, bell_model().schema());
    }

    #[test]
    fn rationals_are_reduced_and_omitted_rows_are_zero() {
        let text = r#"{
            "semiring": "probability",
            "attributes": [
                {"name": "a", "domain": ["0", "1"]},
                {"name": "b", "domain": ["0", "1"]}
            ],
            "contexts": [["a", "b"]],
            "tables": [{
                "context": ["a", "b"],
                "rows": [
                    {"tuple": {"a": "0", "b": "0"}, "value": "2/4"},
                    {"tuple": {"a": "1", "b": "1"}, "value": "0.5"}
                ]
            }]
        }"#;
        let model = parse_model(text).unwrap();
        let half = Value::Rational(rat(1, 2));
        assert_eq!(
            model
                .table(0)
                .get(&Tuple::from_pairs([("a", "0"), ("b", "0")]).unwrap()),
            half
        );
        assert_eq!(
            model
                .table(0)
                .get(&Tuple::from_pairs([("a", "1"), ("b", "1")]).unwrap()),
            half
        );
        assert!(model
            .table(0)
            .get(&Tuple::from_pairs([("a", "1"), ("b", "0")]).unwrap())
            .is_zero());
        // distributions defaulted to false, but the table happens to sum to 1.
        assert!(!model.distributions());
        assert!(model.table(0).is_normalized());
    }

    #[test]
    fn parse_errors_are_specific() {
        let base = |tables: &str, semiring: &str, distributions: &str| {
            format!(
                r#"{{
                    "semiring": {semiring},
                    "distributions": {distributions},
                    "attributes": [
                        {{"name": "a", "domain": ["0", "1"]}},
                        {{"name": "b", "domain": ["0", "1"]}}
                    ],
                    "contexts": [["a", "b"]],
                    "tables": {tables}
                }}"#
            )
        };
        let ok_rows =
            r#"[{"context": ["a", "b"], "rows": [{"tuple": {"a": "0", "b": "0"}, "value": "1"}]}]"#;

        assert!(matches!(
            parse_model("{ not json"),
            Err(Error::Syntax(_))
        ));
        assert!(matches!(
            parse_model(&base(ok_rows, r#""viterbi""#, "false")),
            Err(Error::UnknownSemiring(_))
        ));
        // Unknown attribute in a context.
        assert!(matches!(
            parse_schema(
                r#"{"attributes": [{"name": "a", "domain": ["0"]}], "contexts": [["a", "z"]]}"#
            ),
            Err(Error::UnknownAttribute(z)) if z == "z"
        ));
        // A table whose context set is not declared.
        let stray =
            r#"[{"context": ["a"], "rows": []}]"#;
        assert!(matches!(
            parse_model(&base(stray, r#""boolean""#, "false")),
            Err(Error::Syntax(_))
        ));
        // Two tables for one context.
        let doubled = r#"[
            {"context": ["a", "b"], "rows": []},
            {"context": ["b", "a"], "rows": []}
        ]"#;
        assert!(matches!(
            parse_model(&base(doubled, r#""boolean""#, "false")),
            Err(Error::DuplicateContext(_))
        ));
        // No table at all for the declared context.
        assert!(matches!(
            parse_model(&base("[]", r#""boolean""#, "false")),
            Err(Error::Syntax(_))
        ));
        // A row not covering its context.
        let partial =
            r#"[{"context": ["a", "b"], "rows": [{"tuple": {"a": "0"}, "value": "1"}]}]"#;
        assert!(matches!(
            parse_model(&base(partial, r#""boolean""#, "false")),
            Err(Error::Syntax(_))
        ));
        // A value outside the attribute's domain.
        let outside =
            r#"[{"context": ["a", "b"], "rows": [{"tuple": {"a": "7", "b": "0"}, "value": "1"}]}]"#;
        assert!(matches!(
            parse_model(&base(outside, r#""boolean""#, "false")),
            Err(Error::ValueOutsideDomain { .. })
        ));
        // Normalization is enforced exactly when promised.
        let deficient =
            r#"[{"context": ["a", "b"], "rows": [{"tuple": {"a": "0", "b": "0"}, "value": "1/2"}]}]"#;
        assert!(matches!(
            parse_model(&base(deficient, r#""probability""#, "true")),
            Err(Error::NotNormalized { .. })
        ));
        assert!(parse_model(&base(deficient, r#""probability""#, "false")).is_ok());
        // Negative probabilities never parse.
        let negative =
            r#"[{"context": ["a", "b"], "rows": [{"tuple": {"a": "0", "b": "0"}, "value": "-1"}]}]"#;
        assert!(matches!(
            parse_model(&base(negative, r#""probability""#, "false")),
            Err(Error::NegativeValue(_))
        ));
        // Unknown top-level fields are typos, not extensions.
        assert!(matches!(
            parse_model(r#"{"semiringg": "boolean", "attributes": [], "contexts": []}"#),
            Err(Error::Syntax(_))
        ));
    }

    #[test]
    fn float_models_serialize_to_parseable_documents() {
        let float = born_model(&bell_state(), &calibrated_bell_scenario()).unwrap();
        let text = serialize_float_model(&float);
        let parsed = parse_model(&text).unwrap();
        assert_eq!(parsed.kind(), SemiringKind::Probability);
        assert!(!parsed.distributions());
        assert_eq!(parsed.schema(), float.schema());
        // The exact parse of a shortest-round-trip decimal stays within
        // double precision of the float it came from.
        let row = Tuple::from_pairs([("a", "0"), ("b", "0")]).unwrap();
        match parsed.table(0).get(&row) {
            Value::Rational(r) => {
                let approx: f64 = r.numer().to_string().parse::<f64>().unwrap()
                    / r.denom().to_string().parse::<f64>().unwrap();
                assert!((approx - 0.5).abs() < 1e-15);
            }
            other => panic!("unexpected value {other:?}"),
        }
    }
}
