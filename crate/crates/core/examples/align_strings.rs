//! Aligns two symbol strings and prints the score, the aligned pair and the
//! full dynamic-programming table.
//!
//! cargo run --example align_strings [s1] [s2]

use shapeseq::seqalign::{align_score, format_score, score_matrix, AlignParams, SymbolString};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let s1: SymbolString = args.next().as_deref().unwrap_or("BLMALSCMM").parse()?;
    let s2: SymbolString = args.next().as_deref().unwrap_or("AMLALM").parse()?;
    let params = AlignParams::default();

    let result = align_score(&s1, &s2, &params);
    println!("score\t{}", format_score(result.score, true));
    println!("normalized\t{:.6}", result.normalized);
    println!("aligned_1\t{}", result.aligned_s1);
    println!("aligned_2\t{}", result.aligned_s2);
    println!();
    print!("{}", score_matrix(&s1, &s2, &params).to_tsv(&s1, &s2, true));
    Ok(())
}
