//! The probabilistic no-go: four pairwise-consistent tables that no single
//! global distribution can explain.
//!
//! The model has two parties with two binary measurements each. Every pair
//! of tables agrees on shared marginals (no-signalling), its *support* even
//! glues into a universal relation — yet the hidden-variable linear program
//! is infeasible, and the solver hands back a Farkas certificate: rational
//! multipliers combining the marginal equations into 0 = negative. That
//! certificate is re-verified here by plain matrix arithmetic.
//!
//! Run with: `cargo run --example bell_no_go`

use contextdb::gluing::{
    check_compatibility, classify, lhv_system, ContextualityClass, LhvOutcome,
};
use contextdb::models::bell_model;
use contextdb::Result;

fn main() -> Result<()> {
    let model = bell_model();
    println!("The two-party model, one table per measurement context:\n");
    for (context, table) in model.schema().contexts().iter().zip(model.tables()) {
        println!("  context {context}:  {table}");
    }

    let compat = check_compatibility(&model);
    println!("\npairwise compatible (no-signalling): {}", compat.compatible());
    assert!(compat.compatible());

    let classification = classify(&model)?;
    println!("classification: {}", classification.class.name());
    assert_eq!(
        classification.class,
        ContextualityClass::ProbabilisticallyContextual
    );

    match classification.lhv.as_ref().expect("probability model") {
        LhvOutcome::Infeasible(certificate) => {
            println!("\nno global distribution exists; Farkas certificate (one");
            println!("multiplier per marginal equation, yᵀA ≥ 0 while yᵀb < 0):");
            let rendered: Vec<String> = certificate
                .multipliers()
                .iter()
                .map(|m| m.to_string())
                .collect();
            println!("  y = [{}]", rendered.join(", "));
            let system = lhv_system(&model)?;
            assert!(certificate.verify(&system), "certificate must re-verify");
            println!("  re-verified against the {}×{} system ✓", system.rows(), system.cols());
        }
        LhvOutcome::Feasible(_) => unreachable!("this model admits no global distribution"),
    }

    let glue = classification.support_glue.expect("cascade reached gluing");
    println!(
        "\nthe support alone glues (universal relation with {} rows) —",
        glue.witness().map(|w| w.len()).unwrap_or(0)
    );
    println!("so the obstruction is genuinely probabilistic, not logical.");
    assert!(glue.exists());
    Ok(())
}
