//! From state vectors to empirical tables: equatorial measurements, the Born
//! rule, and the float → exact-rational bridge.
//!
//! A two-qubit maximally entangled state measured at calibrated equatorial
//! angles reproduces, entry for entry, the probabilistic no-go table — first
//! as floats straight out of the Born rule, then as exact rationals after
//! continued-fraction rounding.
//!
//! Run with: `cargo run --example born_rule`

use contextdb::models::{bell_model, ghz_model};
use contextdb::quantum::{
    bell_state, born_model, calibrated_bell_scenario, ghz_scenario, ghz_state, rationalize,
};
use contextdb::Result;

fn main() -> Result<()> {
    // The calibrated scenario: party 1 measures at 0 or π/3, party 2 likewise.
    let state = bell_state();
    let scenario = calibrated_bell_scenario();
    let float = born_model(&state, &scenario)?;

    println!("Born-rule tables for the two-qubit entangled state:");
    for (index, context) in float.schema().contexts().iter().enumerate() {
        let names: Vec<_> = context.iter().map(|a| a.name().to_string()).collect();
        println!("  context {}:", names.join(", "));
        for (tuple, p) in float.table(index) {
            println!("    {tuple} -> {p:.6}");
        }
    }

    // Each table sums to 1 and overlapping marginals agree, up to float fuzz.
    println!(
        "\nnormalization deviation: {:.3e}",
        float.max_normalization_deviation()
    );
    println!(
        "compatibility deviation: {:.3e}",
        float.max_compatibility_deviation()
    );

    // Continued-fraction rounding with denominators ≤ 8 recovers the exact
    // rational table: 3/8 and 1/8 in the mixed contexts, 1/2 on the diagonal.
    let exact = rationalize(&float, 8)?;
    assert_eq!(exact, bell_model());
    println!("\nrationalized with denominator ≤ 8: exactly the no-go table ✓");

    // The same pipeline at n parties: the parity state measured in X/Y.
    for n in [3usize, 4] {
        let state = ghz_state(n)?;
        let scenario = ghz_scenario(n)?;
        let float = born_model(&state, &scenario)?;
        let supports = float.supports(1e-6)?;
        assert_eq!(supports.support_model(), ghz_model(n)?.support_model());
        println!("{n}-party parity state: Born supports match the built-in model ✓");
    }
    Ok(())
}
