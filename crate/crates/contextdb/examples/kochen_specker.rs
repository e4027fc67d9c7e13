//! Schema-level obstructions: ONE-IN-k tables with no global section.
//!
//! Put the same relation on every context — "exactly one attribute is 1" —
//! and ask for a single global 0/1 assignment whose restriction satisfies
//! each context. On some schemas a counting argument already says no:
//! picking the 1-attribute of each context partitions the contexts, so the
//! context count must be divisible by the gcd of the attribute incidence
//! counts. The 18-attribute schema here has every attribute in exactly two
//! of its nine contexts: 2 does not divide 9, so no section exists. The
//! explicit backtracking search over all 2^18 candidates confirms it.
//!
//! Run with: `cargo run --example kochen_specker`

use contextdb::models::{ks18_schema, triangle_schema};
use contextdb::solver::SearchOutcome;
use contextdb::structure::{
    incidence_profile, ks_global_section, one_in_k_instance, parity_divisor_check, ParityCheck,
};
use contextdb::Result;

fn main() -> Result<()> {
    let schema = ks18_schema();
    println!("Nine 4-attribute contexts over 18 attributes:\n");
    for (i, context) in schema.contexts().iter().enumerate() {
        println!("  U{}: {context}", i + 1);
    }

    let profile = incidence_profile(&schema);
    assert!(profile.counts.values().all(|&c| c == 2));
    println!("\nevery attribute occurs in exactly 2 contexts;");
    println!("contexts: {} — and 2 ∤ {}.", profile.context_count, profile.context_count);

    match parity_divisor_check(&schema) {
        ParityCheck::NoGlobalSection { divisor } => {
            println!("counting argument: no ONE-IN-4 global section (divisor {divisor})");
            assert_eq!(divisor, 2);
        }
        ParityCheck::Inconclusive => unreachable!("the counting argument settles this schema"),
    }

    // The instance itself: each context allows exactly its 4 one-hot rows.
    let instance = one_in_k_instance(&schema)?;
    assert!(instance.tables().iter().all(|t| t.len() == 4));

    // Brute confirmation by backtracking search.
    assert_eq!(ks_global_section(&schema)?, SearchOutcome::Exhausted);
    println!("search over 2^18 assignments: exhausted, no section ✓");

    // The miniature version: three attributes, three pairwise contexts.
    let triangle = triangle_schema();
    assert_eq!(
        parity_divisor_check(&triangle),
        ParityCheck::NoGlobalSection { divisor: 2 }
    );
    assert_eq!(ks_global_section(&triangle)?, SearchOutcome::Exhausted);
    println!("\nthe triangle shows the same obstruction with 3 attributes:");
    println!("ONE-IN-2 on a 3-cycle would 2-color an odd cycle.");
    Ok(())
}
