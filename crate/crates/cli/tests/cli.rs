use std::path::PathBuf;
use std::process::Command;

fn palnil(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_palnil")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn file(name: &str, body: &str) -> String {
    let p: PathBuf = [env!("CARGO_TARGET_TMPDIR"), name].iter().collect();
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn normalize() {
    assert_eq!(palnil(&["--rank", "2", "--step", "2", "normalize", "x2 x1"]).1, "x1 * x2 * [x2,x1]\n");
    assert_eq!(palnil(&["normalize", "x1 x1^-1"]).1, "1\n");
    assert_eq!(palnil(&["normalize", "[x2,x1,x1]"]).1, "1\n");
    let (code, out, _) = palnil(&["--step", "3", "--format", "kv", "normalize", "x2 x1 x2^-1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "element=x1 * [x2,x1] * [x2,x1,x2]^-1\nexponents=1,0,1,0,-1\nweight=1\n");
}

#[test]
fn usage_errors() {
    let (code, _, err) = palnil(&["normalize", "x1 +"]);
    assert_eq!(code, 1);
    assert!(err.contains("byte 3"), "{err}");
    assert_eq!(palnil(&["normalize", "x3"]).0, 1);
    assert_eq!(palnil(&["--bogus"]).0, 1);
    assert_eq!(palnil(&["verify", "nosuch"]).0, 1);
    assert_eq!(palnil(&["--rank", "3", "--step", "2", "verify", "thm5.8-n2"]).0, 1);
    assert_eq!(palnil(&["auto", "classify", "/nonexistent/file"]).0, 1);
    let bad = file("bad.txt", "x1 -> x1\nx1 -> x2\n");
    assert_eq!(palnil(&["auto", "classify", &bad]).0, 1);
    assert_eq!(palnil(&["--help"]).0, 0);
}

#[test]
fn invert_round_trip() {
    let mu = file("mu12.txt", "# mu(1,2)\nx1 -> x2 x1 x2\n");
    let (code, out, _) = palnil(&["auto", "invert", &mu]);
    assert_eq!(code, 0);
    assert_eq!(out, "x1 -> x1 * x2^-2 * [x2,x1]^-1\nx2 -> x2\n");
    let inv = file("mu12inv.txt", &out);
    let (_, id, _) = palnil(&["auto", "compose", &mu, &inv]);
    assert_eq!(id, "x1 -> x1\nx2 -> x2\n");
    let (_, kv, _) = palnil(&["--format", "kv", "auto", "invert", &mu]);
    assert_eq!(
        kv,
        "method=palindromic\nfactors=1\nround_trip=true\nimage.1=x1 * x2^-2 * [x2,x1]^-1\nimage.2=x2\n"
    );
}

#[test]
fn not_an_automorphism() {
    let sq = file("square.txt", "x1 -> x1^2\n");
    let (code, _, err) = palnil(&["auto", "invert", &sq]);
    assert_eq!(code, 2);
    assert!(err.contains("not an automorphism"));
}

#[test]
fn classify() {
    let id = file("id.txt", "");
    let (code, out, _) = palnil(&["--format", "kv", "auto", "classify", &id]);
    assert_eq!(code, 0);
    assert_eq!(out, "ia=true\ncentral=true\npalindromic=true\nelementary_palindromic=true\npi_level=3\n");
    let (code, _, err) = palnil(&["--step", "4", "auto", "classify", &id]);
    assert_eq!(code, 1);
    assert!(err.contains("undecided"));
}

#[test]
fn tame_check() {
    let (_, phi, _) = palnil(&["--step", "3", "auto", "gen", "phi2(2,1;1)"]);
    let phi = file("phi21.txt", &phi);
    let (code, out, _) = palnil(&["--step", "3", "--format", "kv", "auto", "tame-check", &phi]);
    assert_eq!(code, 2);
    assert_eq!(out, "status=FAIL\nsum=-2*X1*X2 - X2^2\nfailing_terms=square,mixed\nresidue.1.2=-2\nresidue.2.2=-1\n");
    let (_, ok, _) = palnil(&["--rank", "3", "--step", "3", "auto", "gen", "phi2(1,2;3)"]);
    let ok = file("phi123.txt", &ok);
    assert_eq!(palnil(&["--rank", "3", "--step", "3", "auto", "tame-check", &ok]).0, 0);
}

#[test]
fn decompositions() {
    let args = ["--rank", "3", "--step", "3"];
    let run = |extra: &[&str]| palnil(&[&args[..], extra].concat());
    let (_, e, _) = run(&["auto", "gen", "phi2(1,2;3)^2 phi3(3,1,2;2)^-1"]);
    let e = file("central.txt", &e);
    let (code, out, _) = run(&["auto", "decompose-central", &e]);
    assert_eq!(code, 0);
    let back = out.split_whitespace().collect::<Vec<_>>();
    let (_, e2, _) = run(&[&["auto", "gen"][..], &back].concat());
    assert_eq!(std::fs::read_to_string(&e).unwrap(), e2);

    let (code, _, _) = run(&["auto", "decompose-bglm", &e]);
    assert_eq!(code, 0);
    let (_, wild, _) = run(&["auto", "gen", "phi2(1,2;1)"]);
    let wild = file("wild.txt", &wild);
    let (code, out, _) = run(&["--format", "kv", "auto", "decompose-bglm", &wild]);
    assert_eq!(code, 2);
    assert!(out.starts_with("status=fail\nfactors=0\ndiagnostic=tameness condition violated"), "{out}");

    let mu = file("mu13.txt", "x1 -> x3 x1 x3\n");
    let (code, _, err) = run(&["auto", "decompose-central", &mu]);
    assert_eq!(code, 2);
    assert!(err.contains("precondition"));
}

#[test]
fn eval() {
    let mu = file("mu12e.txt", "x1 -> x2 x1 x2\n");
    assert_eq!(palnil(&["auto", "eval", &mu, "x1 x2"]).1, "x1 * x2^3 * [x2,x1]\n");
}

#[test]
fn verify_suites() {
    let (code, out, _) = palnil(&["--format", "kv", "verify", "lemma2.5", "--rank", "3", "--step", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out, "suite=lemma2.5\nrank=3\nstep=5\nseed=1\ncases=100\nchecks=363\nfailures=0\nstatus=PASS\n");
    let (code, out, _) = palnil(&["--format", "kv", "verify", "foxtable", "--rank", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("note.1=8 rows\n") && out.ends_with("status=PASS\n"));
    let (code, out, _) = palnil(&["verify", "thm5.8-n2"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("status: PASS\n"));
}

#[test]
fn deterministic() {
    let args = ["--format", "kv", "--seed", "42", "--cases", "20", "verify", "thm2.1"];
    let a = palnil(&args);
    assert_eq!(a.0, 0);
    assert_eq!(a, palnil(&args));
    let other = palnil(&["--format", "kv", "--seed", "43", "--cases", "20", "verify", "thm2.1"]);
    assert_eq!(other.0, 0);
}
