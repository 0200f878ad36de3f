//! Decide membership of symbolic coefficient models in the weighted spaces
//! and the left, right and two-sided Moyal algebras.

use moyal::filtration::{classify, moyal_membership, space_inclusion, CoefficientModel, SpaceTag};

fn main() -> moyal::Result<()> {
    let models = ["sep(exp(1), one)", "sep(one, exp(0.5))", "diag(one)", "sep(pow(-2), pow(-2))"];
    let spaces = ["G(0,0)", "G(-2,-2)", "I(-2,-2)", "B(0,0)"];
    for text in models {
        let model: CoefficientModel = text.parse()?;
        let v = moyal_membership(&model)?;
        println!("{model}: ML={} MR={} M={}", v.in_ml, v.in_mr, v.in_m);
        for space in spaces {
            let report = classify(&model, space.parse()?)?;
            let norm = report.norm.map_or("-".to_string(), |n| format!("{n:.6}"));
            println!("  {space:<9} {:?} norm {norm}", report.verdict);
        }
    }

    let a: SpaceTag = "G(5,5)".parse()?;
    let b: SpaceTag = "I(2,2)".parse()?;
    println!("{a} in {b}: {:?}", space_inclusion(a, b));
    println!("{b} in {a}: {:?}", space_inclusion(b, a));
    Ok(())
}
