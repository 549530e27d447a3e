//! Writes a shift/rotation profile file, reads it back and reports malformed input.

use slm_papr::profile_file::{format_profiles, parse_profiles, read_profiles};
use slm_papr::selection::{check_optimal, sel1_profiles};

fn main() -> slm_papr::Result<()> {
    let set = sel1_profiles(64, 4)?;
    let text = format_profiles(&set);
    print!("{text}");

    let dir = std::env::temp_dir().join("slm-papr-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("sel1.txt");
    std::fs::write(&path, &text).expect("write profile file");
    let back = read_profiles(&path)?;
    assert_eq!(back, set);
    println!("read {} profiles, optimal={}", back.len(), check_optimal(&back).passes());

    for bad in ["n=64\n1,0,1,2,3,1,1,1\n", "n=64\n1,0,99,2,3,1,1,1,1\n", "1,0,1,2,3,1,1,1,1\n"] {
        println!("{}", parse_profiles(bad).unwrap_err());
    }
    Ok(())
}
