//! Strong contextuality: parity tables with no consistent global row at all.
//!
//! Each of n parties picks one of two measurements, X(i) or Y(i). When the
//! number of Y choices is even, the table constrains the outcome parity
//! (even weight for 0 mod 4, odd weight for 2 mod 4); odd Y counts leave
//! the outcomes free. From n = 3 on, the parity constraints are jointly
//! unsatisfiable — summing the constraints of a handful of contexts forces
//! an odd number to be even — so *no* global assignment is consistent with
//! every table, even though each table individually is as uniform as can be.
//!
//! Run with: `cargo run --example ghz_parity`

use contextdb::gluing::{classify, strong_contextuality, ContextualityClass};
use contextdb::models::ghz_model;
use contextdb::solver::SearchOutcome;
use contextdb::Result;

fn main() -> Result<()> {
    let model = ghz_model(3)?;
    println!("Three parties, contexts in enumeration order (party 1 fastest):\n");
    for (k, context) in model.schema().contexts().iter().enumerate() {
        let rows = model.table(k).len();
        println!("  {k}: {context}  ({rows} allowed rows)");
    }

    assert_eq!(strong_contextuality(&model)?, SearchOutcome::Exhausted);
    println!("\nexhaustive search: no global row restricts into every table.");

    let classification = classify(&model)?;
    println!("classification: {}", classification.class.name());
    assert_eq!(classification.class, ContextualityClass::StronglyContextual);

    // The same holds for larger party counts; the backtracking search
    // prunes the 2^(2n) candidate space fast.
    for n in 4..=6 {
        let model = ghz_model(n)?;
        let outcome = strong_contextuality(&model)?;
        assert_eq!(outcome, SearchOutcome::Exhausted);
        println!("n = {n}: strongly contextual (search exhausted)");
    }

    // Two parties, by contrast, are satisfiable: X(1)=X(2), Y(1)≠Y(2) has
    // solutions, and the model drops to the bottom of the hierarchy.
    let two = ghz_model(2)?;
    assert_eq!(
        classify(&two)?.class,
        ContextualityClass::NonContextual
    );
    println!("n = 2: non-contextual (the parity constraints are satisfiable)");
    Ok(())
}
