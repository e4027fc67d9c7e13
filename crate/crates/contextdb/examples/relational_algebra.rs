//! The relational-algebra substrate: projection, natural join, tensor, and
//! pushforward over three semirings.
//!
//! The same operators serve double duty. Over the boolean semiring they are
//! classical database operators; over probabilities they are marginalization
//! and independent product; over min-plus they compute optimal costs. The
//! projection/join adjunction shown at the end is the algebraic engine behind
//! every gluing question in this crate.
//!
//! Run with: `cargo run --example relational_algebra`

use std::collections::BTreeMap;

use contextdb::relalg::{difference, intersect, natural_join, project, pushforward, tensor, union};
use contextdb::schema::{Attribute, AttributeSet, DataValue, Schema, Tuple};
use contextdb::semiring::{rat, SemiringKind, Tropical, Value};
use contextdb::valuation::Valuation;
use contextdb::Result;

fn main() -> Result<()> {
    let schema = Schema::uniform(&[&["a", "b", "c"]], &["0", "1"])?;
    let abc = schema.contexts()[0].clone();
    let row = |bits: [&str; 3]| -> Tuple {
        let attrs: Vec<_> = abc.iter().cloned().collect();
        Tuple::new(attrs.into_iter().zip(bits.map(DataValue::new))).expect("distinct attributes")
    };

    // A boolean relation over {a, b, c}: the even-parity rows.
    let even = Valuation::relation(
        abc.clone(),
        schema.domains().clone(),
        [
            row(["0", "0", "0"]),
            row(["0", "1", "1"]),
            row(["1", "0", "1"]),
            row(["1", "1", "0"]),
        ],
    )?;

    // Projection drops columns; join stitches the pieces back together.
    let ab: AttributeSet = [Attribute::new("a"), Attribute::new("b")].into_iter().collect();
    let bc: AttributeSet = [Attribute::new("b"), Attribute::new("c")].into_iter().collect();
    let left = project(&even, &ab)?;
    let right = project(&even, &bc)?;
    let joined = natural_join(&left, &right)?;
    println!("even-parity relation: {} rows", even.len());
    println!("T|ab ⋈ T|bc: {} rows (projections forget parity)", joined.len());

    // The adjunction unit: T ⊆ T|ab ⋈ T|bc, always.
    assert!(even.support().all(|t| joined.contains(t)));
    // Here the inclusion is strict — the join also admits the odd rows.
    assert_eq!(joined.len(), 8);

    // Set operations recover the odd rows as the join minus the original.
    let odd = difference(&joined, &even)?;
    assert_eq!(odd.len(), 4);
    assert_eq!(union(&even, &odd)?.len(), 8);
    assert!(intersect(&even, &odd)?.is_empty());

    // Over the probability semiring, projection is marginalization and it
    // conserves mass: a distribution stays a distribution.
    let uniform_even = Valuation::over(
        &schema,
        &abc,
        SemiringKind::Probability,
        even.support()
            .map(|t| (t.clone(), Value::Rational(rat(1, 4)))),
    )?;
    let marginal = project(&uniform_even, &ab)?;
    assert!(marginal.is_normalized());
    println!("\nmarginal of the uniform even-parity distribution onto {{a, b}}:");
    for (t, v) in marginal.iter() {
        println!("  {t} -> {}", v.render());
    }

    // Over min-plus, the sum in a projection is a minimum: marginalizing a
    // cost table keeps the cheapest explanation of each reduced tuple.
    let costs = Valuation::over(
        &schema,
        &abc,
        SemiringKind::MinPlus,
        [
            (row(["0", "0", "0"]), 0),
            (row(["0", "0", "1"]), 5),
            (row(["1", "0", "0"]), 3),
            (row(["1", "0", "1"]), 1),
        ]
        .map(|(t, c)| (t, Value::Tropical(Tropical::Finite(rat(c, 1))))),
    )?;
    let cheapest = project(&costs, &ab)?;
    println!("\ncheapest costs after summing out c:");
    for (t, v) in cheapest.iter() {
        println!("  {t} -> {}", v.render());
    }
    assert_eq!(
        cheapest.get(&row(["0", "0", "0"]).restrict(&ab)?),
        Value::Tropical(Tropical::Finite(rat(0, 1)))
    );
    assert_eq!(
        cheapest.get(&row(["1", "0", "0"]).restrict(&ab)?),
        Value::Tropical(Tropical::Finite(rat(1, 1)))
    );

    // Tensor puts independent tables side by side on tagged attribute copies.
    let coin_schema = Schema::uniform(&[&["x"]], &["0", "1"])?;
    let x = coin_schema.contexts()[0].clone();
    let coin = Valuation::over(
        &coin_schema,
        &x,
        SemiringKind::Probability,
        coin_schema
            .enumerate_tuples(&x)?
            .into_iter()
            .map(|t| (t, Value::Rational(rat(1, 2)))),
    )?;
    let two_coins = tensor(&coin, &coin)?;
    assert!(two_coins.is_normalized());
    assert_eq!(two_coins.len(), 4);
    println!("\ntwo independent coins (tensor):");
    for (t, v) in two_coins.iter() {
        println!("  {t} -> {}", v.render());
    }

    // Pushforward along an arbitrary tuple map: here, the XOR of a and b.
    // Weights of tuples with the same image add up — marginals are just the
    // special case where the map is restriction.
    let parity_attr = Attribute::new("parity");
    let target: AttributeSet = [parity_attr.clone()].into_iter().collect();
    let target_domains: BTreeMap<Attribute, Vec<DataValue>> = [(
        parity_attr.clone(),
        vec![DataValue::new("0"), DataValue::new("1")],
    )]
    .into_iter()
    .collect();
    let xor = pushforward(&marginal, &target, &target_domains, |t| {
        let a = t.get(&Attribute::new("a"))?.token().parse::<u8>().ok()?;
        let b = t.get(&Attribute::new("b"))?.token().parse::<u8>().ok()?;
        Tuple::new([(parity_attr.clone(), DataValue::new((a ^ b).to_string()))]).ok()
    })?;
    println!("\npushforward of the {{a, b}} marginal along xor:");
    for (t, v) in xor.iter() {
        println!("  {t} -> {}", v.render());
    }
    assert!(xor.is_normalized());
    Ok(())
}
