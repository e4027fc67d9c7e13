//! Acyclic schemas are the safe ones: GYO reduction, join-tree generation,
//! and the boundary where global explanations can no longer be guaranteed.
//!
//! On an acyclic schema, *every* compatible family of tables extends to a
//! global distribution — so random compatible instances generated along a
//! join tree are always hidden-variable feasible. On a cyclic schema the
//! guarantee fails, and the minimal counterexample is the anticorrelated
//! triangle: three perfectly valid pairwise tables with no global story.
//!
//! Run with: `cargo run --example acyclicity`

use contextdb::gluing::{check_compatibility, lhv_feasible, LhvOutcome};
use contextdb::models::triangle_schema;
use contextdb::schema::{Schema, Tuple};
use contextdb::semiring::{rat, SemiringKind, Value};
use contextdb::structure::{
    generate_compatible_instance, gyo_acyclicity, vorobev_guarantee, AcyclicityResult, GyoStep,
};
use contextdb::valuation::Valuation;
use contextdb::{EmpiricalModel, Result};

fn main() -> Result<()> {
    // A chain of contexts is acyclic; GYO reduction empties it and logs how.
    let chain = Schema::uniform(&[&["a", "b"], &["b", "c"], &["c", "d"]], &["0", "1"])?;
    println!("GYO reduction of the chain {{a,b}}, {{b,c}}, {{c,d}}:");
    match gyo_acyclicity(&chain) {
        AcyclicityResult::Acyclic { elimination } => {
            for step in &elimination {
                match step {
                    GyoStep::RemoveAttribute { attribute, context } => {
                        println!("  remove attribute {attribute} (only lives in context {context})")
                    }
                    GyoStep::RemoveContext { context, witness } => {
                        println!("  remove context {context} (contained in context {witness})")
                    }
                }
            }
        }
        AcyclicityResult::Cyclic { .. } => unreachable!("chains are acyclic"),
    }
    assert!(vorobev_guarantee(&chain));

    // The triangle stalls immediately: no ear to cut.
    let triangle = triangle_schema();
    assert!(!vorobev_guarantee(&triangle));
    println!("\nthe triangle {{a,b}}, {{b,c}}, {{a,c}} is cyclic (GYO stalls).");

    // Acyclic ⇒ every compatible instance glues. Sample a few and check.
    println!("\nrandom compatible instances on the chain:");
    for seed in 0..5 {
        let instance = generate_compatible_instance(&chain, seed)?;
        assert!(check_compatibility(&instance).compatible());
        match lhv_feasible(&instance)? {
            LhvOutcome::Feasible(global) => {
                let support = global.as_valuation().len();
                println!("  seed {seed}: compatible ✓, global distribution found ({support} rows)");
            }
            LhvOutcome::Infeasible(_) => unreachable!("acyclic + compatible ⇒ feasible"),
        }
    }

    // Cyclic ⇒ no such guarantee. Perfect anticorrelation on each edge of
    // the triangle is pairwise compatible (both marginals are uniform), but
    // an odd cycle of "disagree" constraints has no global explanation.
    let anti = anticorrelated_triangle()?;
    assert!(check_compatibility(&anti).compatible());
    match lhv_feasible(&anti)? {
        LhvOutcome::Infeasible(certificate) => {
            println!("\nanticorrelated triangle: compatible, yet infeasible —");
            println!(
                "  Farkas certificate over {} equations refutes every global distribution.",
                certificate.multipliers().len()
            );
        }
        LhvOutcome::Feasible(_) => unreachable!("odd anticorrelation cycles cannot glue"),
    }
    Ok(())
}

/// On each edge of the triangle: the two endpoints disagree, 1/2 each way.
fn anticorrelated_triangle() -> Result<EmpiricalModel> {
    let schema = triangle_schema();
    let tables: Result<Vec<Valuation>> = schema
        .contexts()
        .iter()
        .map(|context| {
            let attrs: Vec<_> = context.iter().cloned().collect();
            Valuation::over(
                &schema,
                context,
                SemiringKind::Probability,
                [("0", "1"), ("1", "0")].into_iter().map(|(x, y)| {
                    let tuple = Tuple::new(vec![
                        (attrs[0].clone(), x.into()),
                        (attrs[1].clone(), y.into()),
                    ])
                    .expect("distinct attributes");
                    (tuple, Value::Rational(rat(1, 2)))
                }),
            )
        })
        .collect();
    EmpiricalModel::new(schema, tables?, true)
}
