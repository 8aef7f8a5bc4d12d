// Driving the command-line subcommands from code.

use adscmc::cli::{run_command, Command, Options, RunConfig};

fn main() -> adscmc::Result<()> {
    let options = Options { q: Some("u".into()), r: Some("0".into()), n: Some(41), ..Options::default() };
    let outcome = run_command(&RunConfig { command: Command::Cmc1, options })?;
    print!("{}", outcome.render());
    println!("exit status {}", outcome.exit_code());

    let outcome = run_command(&RunConfig { command: Command::Gallery("horosphere".into()), options: Options::default() })?;
    println!("gallery horosphere: exit status {}", outcome.exit_code());
    Ok(())
}
