//! Empirical models: one table per context.
//!
//! An [`EmpiricalModel`] pairs a [`Schema`] with one valuation per context,
//! all over the same semiring. It is the database-style presentation of an
//! empirical scenario: each context's table records what was (or can be)
//! jointly observed for that set of attributes, and nothing relates the
//! tables beyond their overlapping attribute sets.
//!
//! Models may optionally promise that every table is a distribution (total
//! mass one); the promise is validated at construction and round-trips
//! through the interchange format.

use crate::error::{Error, Result};
use crate::schema::{AttributeSet, Schema};
use crate::semiring::SemiringKind;
use crate::valuation::Valuation;

/// A schema together with one same-semiring table per context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalModel {
    schema: Schema,
    tables: Vec<Valuation>,
    distributions: bool,
}

impl EmpiricalModel {
    /// Validate and build a model.
    ///
    /// There must be exactly one table per context, in context order, each
    /// based on its context with the schema's domains, and all tables must
    /// share one semiring. With `distributions = true` every table must
    /// additionally have total mass one.
    pub fn new(schema: Schema, tables: Vec<Valuation>, distributions: bool) -> Result<Self> {
        if tables.len() != schema.contexts().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} contexts but {} tables",
                schema.contexts().len(),
                tables.len()
            )));
        }
        let kind = match tables.first() {
            Some(t) => t.kind(),
            None => return Err(Error::EmptySchema),
        };
        for (context, table) in schema.contexts().iter().zip(&tables) {
            if table.kind() != kind {
                return Err(Error::WrongSemiring {
                    expected: kind.name(),
                    found: table.kind().name(),
                });
            }
            if table.base() != context {
                return Err(Error::BaseMismatch {
                    expected: context.to_string(),
                    found: table.base().to_string(),
                });
            }
            let expected = schema.restricted_domains(context)?;
            if *table.domains() != expected {
                let offender = expected
                    .iter()
                    .find(|(a, d)| table.domains().get(*a) != Some(d))
                    .map(|(a, _)| a.name().to_string())
                    .unwrap_or_default();
                return Err(Error::DomainMismatch(offender));
            }
            if distributions && !table.is_normalized() {
                return Err(Error::NotNormalized {
                    total: table.total().render(),
                });
            }
        }
        Ok(EmpiricalModel {
            schema,
            tables,
            distributions,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// The tables, in the schema's context order.
    pub fn tables(&self) -> &[Valuation] {
        &self.tables
    }

    pub fn table(&self, index: usize) -> &Valuation {
        &self.tables[index]
    }

    /// The table attached to a given context, if that context exists.
    pub fn table_for(&self, context: &AttributeSet) -> Option<&Valuation> {
        self.schema
            .contexts()
            .iter()
            .position(|c| c == context)
            .map(|i| &self.tables[i])
    }

    /// The common semiring of all tables.
    pub fn kind(&self) -> SemiringKind {
        self.tables[0].kind()
    }

    /// Whether the model promises (and validated) normalized tables.
    pub fn distributions(&self) -> bool {
        self.distributions
    }

    /// The possibilistic shadow: apply the support homomorphism to every
    /// table, producing a boolean model over the same schema.
    ///
    /// The support model's `distributions` flag records whether every
    /// support is non-empty (the boolean notion of normalization).
    pub fn support_model(&self) -> EmpiricalModel {
        let tables: Vec<Valuation> = self.tables.iter().map(|t| t.support_relation()).collect();
        let distributions = tables.iter().all(|t| !t.is_empty());
        EmpiricalModel {
            schema: self.schema.clone(),
            tables,
            distributions,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::Tuple;
    use crate::semiring::{rat, Value};

    fn chain_schema() -> Schema {
        Schema::uniform(&[&["a", "b"], &["b", "c"]], &["0", "1"]).unwrap()
    }

    fn uniform_table(schema: &Schema, context: &AttributeSet) -> Valuation {
        let tuples = schema.enumerate_tuples(context).unwrap();
        let w = rat(1, tuples.len() as i64);
        Valuation::over(
            schema,
            context,
            SemiringKind::Probability,
            tuples.into_iter().map(|t| (t, Value::Rational(w.clone()))),
        )
        .unwrap()
    }

    #[test]
    fn a_model_needs_one_table_per_context_in_order() {
        let s = chain_schema();
        let t0 = uniform_table(&s, &s.contexts()[0].clone());
        let t1 = uniform_table(&s, &s.contexts()[1].clone());

        assert!(EmpiricalModel::new(s.clone(), vec![t0.clone(), t1.clone()], true).is_ok());
        assert!(matches!(
            EmpiricalModel::new(s.clone(), vec![t0.clone()], true),
            Err(Error::DimensionMismatch(_))
        ));
        // Swapped tables sit on the wrong contexts.
        assert!(matches!(
            EmpiricalModel::new(s.clone(), vec![t1, t0], true),
            Err(Error::BaseMismatch { .. })
        ));
    }

    #[test]
    fn distribution_promise_is_validated() {
        let s = chain_schema();
        let c0 = s.contexts()[0].clone();
        let c1 = s.contexts()[1].clone();
        let short = Valuation::over(
            &s,
            &c0,
            SemiringKind::Probability,
            [(
                Tuple::from_pairs([("a", "0"), ("b", "0")]).unwrap(),
                Value::Rational(rat(1, 2)),
            )],
        )
        .unwrap();
        let ok = uniform_table(&s, &c1);
        assert!(matches!(
            EmpiricalModel::new(s.clone(), vec![short.clone(), ok.clone()], true),
            Err(Error::NotNormalized { .. })
        ));
        // Without the promise the same tables are accepted.
        assert!(EmpiricalModel::new(s, vec![short, ok], false).is_ok());
    }

    #[test]
    fn mixed_semirings_are_rejected() {
        let s = chain_schema();
        let c0 = s.contexts()[0].clone();
        let c1 = s.contexts()[1].clone();
        let prob = uniform_table(&s, &c0);
        let boolean = Valuation::over(
            &s,
            &c1,
            SemiringKind::Boolean,
            [(
                Tuple::from_pairs([("b", "0"), ("c", "0")]).unwrap(),
                Value::Bool(true),
            )],
        )
        .unwrap();
        assert!(matches!(
            EmpiricalModel::new(s, vec![prob, boolean], false),
            Err(Error::WrongSemiring { .. })
        ));
    }

    #[test]
    fn support_model_is_boolean_over_the_same_schema() {
        let s = chain_schema();
        let t0 = uniform_table(&s, &s.contexts()[0].clone());
        let t1 = uniform_table(&s, &s.contexts()[1].clone());
        let m = EmpiricalModel::new(s, vec![t0, t1], true).unwrap();
        let sm = m.support_model();
        assert_eq!(sm.kind(), SemiringKind::Boolean);
        assert!(sm.distributions());
        assert_eq!(sm.schema(), m.schema());
        for (orig, supp) in m.tables().iter().zip(sm.tables()) {
            assert!(orig.support().eq(supp.support()));
        }
    }
}
