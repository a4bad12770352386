// Driving the command-line front end in-process, with flags and with a JSON
// config file.

use std::error::Error;

use gch::cli::run_from;

fn call(args: &[&str]) -> Result<(i32, String), Box<dyn Error>> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_from(std::iter::once("gch").chain(args.iter().copied()), &mut out, &mut err);
    eprint!("{}", String::from_utf8(err)?);
    Ok((code, String::from_utf8(out)?))
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (code, out) = call(&[
        "eval", "--mu", "-1", "--epsilon", "0.5", "--nu", "1.5", "--omega-cap", "2", "--omega",
        "0.25", "--x-count", "5",
    ])?;
    println!("eval exit {code}\n{out}");

    let dir = std::env::temp_dir().join(format!("gch-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let config = dir.join("qqbar.json");
    std::fs::write(&config, r#"{"system": "qqbar", "b_slope": 1.0, "l": 0, "i_max": 1, "beta_max": 2}"#)?;
    let (code, out) = call(&["spectrum", "--config", config.to_str().ok_or("path")?, "--format", "json"])?;
    println!("spectrum exit {code}\n{out}");
    std::fs::remove_dir_all(&dir)?;

    let (code, _) = call(&[
        "eval", "--mu", "1", "--epsilon", "1", "--nu", "-1", "--omega-cap", "1", "--omega", "1",
    ])?;
    println!("invalid first-kind request exits with {code}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
