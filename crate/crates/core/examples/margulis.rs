//! Girth, diameter and second eigenvalue of the Margulis graphs, written
//! as CSV to standard output.

use coarsebox::expanders::{margulis_family, write_family_csv, DEFAULT_MAX_PRIME};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let summary = margulis_family(&[3, 5, 7, 11], DEFAULT_MAX_PRIME, 0)?;
    write_family_csv(&summary, std::io::stdout())?;
    println!("girth nondecreasing: {}", summary.girth_nondecreasing);
    println!("max diameter/girth: {}", summary.max_ratio.as_deref().unwrap_or("undefined"));
    if let Some(fit) = &summary.fit {
        println!(
            "girth ~ {:.3} log p + {:.3} (reference slope {})",
            fit.slope, fit.intercept, fit.reference_slope
        );
    }
    Ok(())
}
