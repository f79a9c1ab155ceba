use std::fs;
use std::path::Path;

use hyperpath_cli::run;

const GADGET: &str = "vertices: s a b t\ns -> a\ns -> b\na -> t\nb -> t\na b -> t\n";

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn call(args: &[&str], stdin: &str) -> Outcome {
    let mut argv = vec!["hyperpath"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn enumerate_reads_stdin_and_streams_arc_ids() {
    let o = call(&["enumerate", "--source", "s", "--target", "t", "-"], GADGET);
    assert_eq!(o.code, 0);
    let mut lines: Vec<&str> = o.stdout.lines().collect();
    lines.sort_unstable();
    assert_eq!(lines, ["0 1 4", "0 2", "1 3"]);
}

#[test]
fn enumerate_limit_and_stats() {
    let o = call(&["enumerate", "--source", "s", "--target", "t", "--limit", "1", "--stats", "-"], GADGET);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().count(), 1);
    assert!(o.stderr.contains("solutions_emitted=1"));
    assert!(o.stderr.contains("max_checks_between_outputs="));
    let none = call(&["enumerate", "--source", "s", "--target", "t", "--limit", "0", "-"], GADGET);
    assert_eq!((none.code, none.stdout.as_str()), (0, ""));
}

#[test]
fn target_inside_sources_prints_the_empty_hyperpath() {
    let o = call(&["enumerate", "--source", "s,t", "--target", "t", "-"], GADGET);
    assert_eq!((o.code, o.stdout.as_str()), (0, "\n"));
}

#[test]
fn disconnected_target_prints_nothing() {
    let o = call(&["enumerate", "--source", "a", "--target", "s", "-"], GADGET);
    assert_eq!((o.code, o.stdout.as_str()), (0, ""));
}

#[test]
fn enumerate_rejects_non_b_input_with_domain_status() {
    let o = call(&["enumerate", "--source", "s", "--target", "t", "-"], "s -> a t\n");
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("B-hypergraph"));
}

#[test]
fn connect_and_check() {
    let o = call(&["connect", "--source", "a", "-"], GADGET);
    assert_eq!(o.stdout, "a t\n");
    let ok = call(&["check", "--source", "s", "--target", "t", "--arcs", "0,2", "-"], GADGET);
    assert_eq!(ok.stdout, "valid\n");
    let bad = call(&["check", "--source", "s", "--target", "t", "--arcs", "0,1,2", "-"], GADGET);
    assert!(bad.stdout.starts_with("invalid: "), "{}", bad.stdout);
    let empty = call(&["check", "--source", "s", "--target", "t", "-"], GADGET);
    assert!(empty.stdout.starts_with("invalid: "));
}

#[test]
fn oracle_subcommands() {
    let o = call(&["oracle", "hyperpaths", "--source", "s", "--target", "t", "-"], GADGET);
    assert_eq!(o.stdout, "0 2\n1 3\n0 1 4\n");
    let o = call(&["oracle", "induced", "--source", "s", "--target", "t", "-"], GADGET);
    assert_eq!(o.stdout, "s a t\ns b t\n");
    let o = call(&["oracle", "separators", "--source", "s", "--target", "t", "-"], GADGET);
    assert_eq!(o.stdout, "a b\n");
    let o = call(&["oracle", "transversals", "-"], "1 2\n2 3\n");
    assert_eq!(o.stdout, "2\n1 3\n");
}

#[test]
fn oracle_cap_exceeded_is_a_domain_error() {
    let o = call(&["oracle", "hyperpaths", "--source", "s", "--target", "t", "--cap", "2", "-"], GADGET);
    assert_eq!(o.code, 1);
}

#[test]
fn reduce_writes_instance_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write(dir.path(), "f.cnf", "p cnf 2 2\n1 2 2 0\n-1 -2 -2 0\n");
    let out = dir.path().join("d.dhg");
    let o = call(&["reduce", "sat-induced", &cnf, out.to_str().unwrap()], "");
    assert_eq!(o.code, 0, "{}", o.stderr);
    let dhg = fs::read_to_string(&out).unwrap();
    assert!(dhg.starts_with("vertices: s t x_1 nx_1 x_2 nx_2 c_1 c_2\n"));
    let meta = fs::read_to_string(dir.path().join("d.dhg.meta")).unwrap();
    assert!(meta.contains("kind: sat-induced"));

    let o = call(&["reduce", "sat-separator", "--bounded-tail", &cnf, "-"], "");
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("vertices: "));
    assert!(o.stderr.contains("variant: bounded-tail"));

    let o = call(&["reduce", "transversal", "-", "-"], "1 2\n2 3\n");
    assert_eq!(o.code, 0);
    assert!(o.stderr.contains("kind: transversal"));
}

#[test]
fn transversals_pipeline() {
    let o = call(&["transversals", "-"], "1 2\n2 3\n");
    assert_eq!((o.code, o.stdout.as_str()), (0, "2\n1 3\n"));
}

#[test]
fn bench_emits_csv() {
    let o = call(&["bench", "--family", "diamond", "--size", "3"], "");
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "solution_index,checks_since_last,depth");
    assert_eq!(lines.len(), 1 + 8);
    assert!(lines[1].starts_with("0,"));
}

#[test]
fn usage_and_parse_errors_exit_with_two() {
    assert_eq!(call(&["frobnicate"], "").code, 2);
    assert_eq!(call(&["enumerate", "-"], GADGET).code, 2);
    let o = call(&["enumerate", "--source", "s", "--target", "t", "-"], "a -> \n");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 1"), "{}", o.stderr);
    assert_eq!(call(&["enumerate", "--source", "q", "--target", "t", "-"], GADGET).code, 2);
    assert_eq!(call(&["connect", "--source", "s", "/nonexistent/file.dhg"], "").code, 2);
}

#[test]
fn help_goes_to_stdout() {
    let o = call(&["--help"], "");
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("enumerate"));
}
