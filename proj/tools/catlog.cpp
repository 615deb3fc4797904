// Command-line front end for the toolkit: well-formedness checking, proof
// search, slash evaluation, witness extraction, gluing, and the full
// pipeline over fixture files.

#include "catlog/pipeline.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"proof toolkit for the dependently sorted language of categories"};
  app.require_subcommand(1);

  catlog::RunConfig cfg;

  auto addOracle = [&](CLI::App* cmd) {
    cmd->add_option("--oracle", cfg.oracleSpec,
                    "provability oracle: congruence | search:<depth> | certs:<dir>");
    cmd->add_option("--words", cfg.wordBudget,
                    "congruence oracle word-length budget");
  };

  CLI::App* check = app.add_subcommand("check", "parse and check fixture files");
  check->add_option("--theory", cfg.theoryFile, "theory the inputs refer to");
  check->add_option("files", cfg.checkFiles, "files to check (.thy .cat .mdl .prf .fm)");
  addOracle(check);

  CLI::App* prove = app.add_subcommand("prove", "bounded proof search");
  prove->add_option("--theory", cfg.theoryFile)->required();
  prove->add_option("--goal", cfg.formulaText)->required();
  prove->add_option("--ctx", cfg.contextText, "ambient context declarations");
  prove->add_option("--depth", cfg.depth, "proof size bound");
  prove->add_option("--out", cfg.outDir, "directory for the certificate");
  addOracle(prove);

  CLI::App* slash = app.add_subcommand("slash", "evaluate the slash predicate");
  slash->add_option("--theory", cfg.theoryFile)->required();
  slash->add_option("--model", cfg.modelFile, "model file (default: discrete)");
  slash->add_option("--formula", cfg.formulaText)->required();
  slash->add_option("--out", cfg.outDir, "directory for the certificate");
  addOracle(slash);

  CLI::App* extract = app.add_subcommand("extract", "extract witnesses from proofs");
  extract->add_option("--theory", cfg.theoryFile)->required();
  extract->add_option("--model", cfg.modelFile);
  extract->add_option("goals", cfg.goalFiles, "goal files")->required();
  addOracle(extract);

  CLI::App* glue = app.add_subcommand("glue", "glue a finite category to a theory");
  glue->add_option("--theory", cfg.theoryFile)->required();
  glue->add_option("--category", cfg.categoryFile)->required();
  glue->add_option("--budget", cfg.budget, "term-completion entry budget");
  glue->add_option("--terminal", cfg.terminal, "terminal object constant");
  glue->add_option("--out", cfg.outDir);
  addOracle(glue);

  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "completion, gluing, certification, extraction");
  pipeline->add_option("--theory", cfg.theoryFile)->required();
  pipeline->add_option("--category", cfg.categoryFile)->required();
  pipeline->add_option("--budget", cfg.budget);
  pipeline->add_option("--terminal", cfg.terminal);
  pipeline->add_option("--goals", cfg.goalFiles, "goal files over the base theory");
  pipeline->add_option("--out", cfg.outDir)->required();
  addOracle(pipeline);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return catlog::cmd_check(cfg, std::cout);
    if (prove->parsed()) return catlog::cmd_prove(cfg, std::cout);
    if (slash->parsed()) return catlog::cmd_slash(cfg, std::cout);
    if (extract->parsed()) return catlog::cmd_extract(cfg, std::cout);
    if (glue->parsed()) return catlog::cmd_glue(cfg, std::cout);
    if (pipeline->parsed()) return catlog::cmd_pipeline(cfg, std::cout);
  } catch (const catlog::Error& e) {
    std::cout << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
