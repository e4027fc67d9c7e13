//! Logical contextuality: a possible row that is globally impossible.
//!
//! The Hardy model is purely relational — each table just lists which joint
//! outcomes can occur. Global rows consistent with all four tables exist,
//! so the model is not strongly contextual. But the supported row
//! `(a: 0, b: 0)` extends to none of them: gluing fails at the level of
//! supports, with no probabilities involved.
//!
//! Run with: `cargo run --example hardy_paradox`

use contextdb::gluing::{classify, strong_contextuality, universal_relation, ContextualityClass};
use contextdb::models::hardy_model;
use contextdb::schema::Tuple;
use contextdb::Result;

fn main() -> Result<()> {
    let model = hardy_model();
    println!("The relational model (1 = the row can occur):\n");
    for (context, table) in model.schema().contexts().iter().zip(model.tables()) {
        println!("  context {context}:  {table}");
    }

    // The universal relation fails: no single relation on {a, a', b, b'}
    // projects onto all four tables...
    let glue = universal_relation(&model)?;
    println!("\nuniversal relation exists: {}", glue.exists());
    assert!(!glue.exists());

    // ...even though individual global rows consistent with every table do
    // exist — the search finds the canonically least one.
    let outcome = strong_contextuality(&model)?;
    let witness = outcome.witness().expect("sections exist for this model");
    println!("least global row consistent with all tables: {witness}");
    assert_eq!(
        *witness,
        Tuple::from_pairs([("a", "0"), ("a'", "0"), ("b", "1"), ("b'", "1")])?
    );

    // The culprit: (a: 0, b: 0) is in the {a, b} table, but forcing it
    // cascades into a contradiction. With a = 0 the {a, b'} table forces
    // b' = 1; with b = 0 the {a', b} table forces a' = 1; and then
    // (a': 1, b': 1) is excluded.
    let hardy_row = Tuple::from_pairs([("a", "0"), ("b", "0")])?;
    assert!(model.table(0).contains(&hardy_row));
    let schema = model.schema();
    for global in schema.enumerate_tuples(schema.global())? {
        let consistent = schema
            .contexts()
            .iter()
            .zip(model.tables())
            .all(|(c, t)| t.contains(&global.restrict(c).unwrap()));
        if consistent {
            assert_ne!(global.restrict(&schema.contexts()[0])?, hardy_row);
        }
    }
    println!("\nthe supported row {hardy_row} extends to no global row;");

    let classification = classify(&model)?;
    println!("classification: {}", classification.class.name());
    assert_eq!(classification.class, ContextualityClass::LogicallyContextual);
    Ok(())
}
