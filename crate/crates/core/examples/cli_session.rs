//! Drives the command-line front end in-process and prints the manifest it
//! writes next to each artifact.

use gyrolab::cli::run;

fn main() -> std::io::Result<()> {
    let out = std::env::temp_dir().join("gyrolab-cli-session");
    std::fs::create_dir_all(&out)?;
    let out = out.display().to_string();
    let sessions: [&[&str]; 4] = [
        &["axioms", "--instance", "mobius", "--samples", "2000"],
        &["words", "--n", "5"],
        &["cover", "--instance", "einstein", "--radius", "0.5"],
        &[
            "suitable",
            "--instance",
            "integers",
            "--method",
            "nonprecompact",
            "--budget",
            "20",
        ],
    ];
    for args in sessions {
        let mut argv = vec!["gyrolab"];
        argv.extend_from_slice(args);
        argv.extend_from_slice(&["--out", &out]);
        let code = run(argv);
        let manifest = std::fs::read_to_string(format!("{out}/manifest.json"))?;
        println!("{} -> exit {code}", args.join(" "));
        println!("{manifest}");
    }
    Ok(())
}
