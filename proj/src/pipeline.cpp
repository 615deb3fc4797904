#include "catlog/pipeline.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace catlog {

namespace {

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + file.string());
  out << content;
}

std::shared_ptr<const Oracle> make_oracle(const std::string& spec,
                                          std::shared_ptr<const TheoryData> data,
                                          std::size_t wordBudget) {
  if (spec == "congruence") return make_congruence_oracle(std::move(data), wordBudget);
  if (spec.rfind("search:", 0) == 0)
    return make_search_oracle(std::move(data), std::stoul(spec.substr(7)));
  if (spec.rfind("certs:", 0) == 0)
    return make_certificate_oracle(std::move(data), spec.substr(6));
  throw Error(ErrorKind::InvalidInput, "unknown oracle spec " + spec);
}

}  // namespace

Theory load_theory(const std::filesystem::path& file, const RunConfig& cfg) {
  ParsedTheory pt = parse_theory(slurp(file));
  auto data = make_theory_data(pt.name, pt.signature, pt.axioms);
  return Theory{data, make_oracle(cfg.oracleSpec, data, cfg.wordBudget)};
}

FiniteCategory load_category(const std::filesystem::path& file) {
  return parse_category(slurp(file));
}

Model load_model(const Theory& t, const std::filesystem::path& file) {
  return make_model(t, parse_model_classes(slurp(file)));
}

GoalFile parse_goal_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string goalLine;
  std::ostringstream rest;
  while (std::getline(in, line)) {
    std::string stripped = line;
    if (auto h = stripped.find('#'); h != std::string::npos)
      stripped = stripped.substr(0, h);
    if (goalLine.empty() && stripped.find_first_not_of(" \t\r") != std::string::npos) {
      std::istringstream ls(stripped);
      std::string kw;
      ls >> kw;
      if (kw != "goal") throw ParseError("goal file must start with 'goal <formula>'", 1, 1);
      std::getline(ls, goalLine);
      continue;
    }
    rest << line << "\n";
  }
  if (goalLine.empty()) throw ParseError("missing goal line", 1, 1);
  return {parse_formula(goalLine), parse_certificate(rest.str())};
}

std::string print_goal_file(const Formula& goal, const Proof& proof) {
  return "goal " + print(goal) + "\n" + print_certificate(proof);
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const RunConfig& cfg, std::ostream& diag) {
  std::optional<Theory> theory;
  if (!cfg.theoryFile.empty()) {
    try {
      theory = load_theory(cfg.theoryFile, cfg);
      diag << "ok " << cfg.theoryFile.string() << "\n";
    } catch (const Error& e) {
      diag << "error " << cfg.theoryFile.string() << ": " << e.what() << "\n";
      return 1;
    }
  }
  int status = 0;
  for (const auto& file : cfg.checkFiles) {
    try {
      std::string ext = file.extension().string();
      if (ext == ".thy") {
        load_theory(file, cfg);
      } else if (ext == ".cat") {
        load_category(file);
      } else if (ext == ".mdl") {
        if (!theory) throw Error(ErrorKind::InvalidInput, "model file needs --theory");
        Model m = load_model(*theory, file);
        validate_model(*theory, m);
      } else if (ext == ".prf") {
        if (!theory) throw Error(ErrorKind::InvalidInput, "proof file needs --theory");
        GoalFile g = parse_goal_file(slurp(file));
        check_proof(Judgement{theory->view(), {}, {}, g.goal}, g.proof);
      } else if (ext == ".fm") {
        // line-oriented: optional `context <decls>`, then `formula <f>` lines
        std::istringstream in(slurp(file));
        std::string line;
        Context ctx;
        Signature sig = theory ? theory->signature() : Signature{};
        int lineNo = 0;
        while (std::getline(in, line)) {
          ++lineNo;
          if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
          std::istringstream ls(line);
          std::string kw;
          if (!(ls >> kw)) continue;
          std::string restOfLine;
          std::getline(ls, restOfLine);
          if (kw == "context") {
            ctx = parse_context(restOfLine);
            check_context(sig, ctx);
          } else if (kw == "formula") {
            check_formula(sig, ctx, parse_formula(restOfLine));
          } else {
            throw ParseError("expected 'context' or 'formula'", lineNo, 1);
          }
        }
      } else {
        throw Error(ErrorKind::InvalidInput, "unknown input kind " + ext);
      }
      diag << "ok " << file.string() << "\n";
    } catch (const Error& e) {
      diag << "error " << file.string() << ": " << e.what() << "\n";
      status = 1;
    }
  }
  return status;
}

// ---------------------------------------------------------------------------
// prove

int cmd_prove(const RunConfig& cfg, std::ostream& diag) {
  Theory t = load_theory(cfg.theoryFile, cfg);
  Context ctx = parse_context(cfg.contextText);
  Formula goal = parse_formula(cfg.formulaText);
  Judgement j{t.view(), ctx, {}, goal};
  auto p = bounded_search(j, cfg.depth);
  if (!p) {
    diag << "not-found (depth " << cfg.depth << ")\n";
    return 1;
  }
  diag << "proved (" << p->size() << " nodes)\n";
  if (!cfg.outDir.empty() && ctx.empty()) {
    std::filesystem::create_directories(cfg.outDir);
    spit(cfg.outDir / (digest(print(goal)) + ".prf"), print_goal_file(goal, *p));
  } else {
    // goal files carry closed judgements; open goals print inline
    diag << print_certificate(*p);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// slash

int cmd_slash(const RunConfig& cfg, std::ostream& diag) {
  Theory t = load_theory(cfg.theoryFile, cfg);
  Model m = cfg.modelFile.empty() ? congruence_close(t, {})
                                  : load_model(t, cfg.modelFile);
  validate_model(t, m);
  Formula f = parse_formula(cfg.formulaText);
  FpCertificate c = fp_eval(t, m, f);
  diag << (c.verdict ? "fp-true" : "fp-false") << " " << print(f) << "\n";
  if (!cfg.outDir.empty()) {
    std::filesystem::create_directories(cfg.outDir);
    spit(cfg.outDir / (digest(print(f)) + ".cert.json"),
         certificate_json(c).dump(2) + "\n");
  }
  return c.verdict ? 0 : 1;
}

// ---------------------------------------------------------------------------
// extract

int cmd_extract(const RunConfig& cfg, std::ostream& diag) {
  Theory t = load_theory(cfg.theoryFile, cfg);
  Model m = cfg.modelFile.empty() ? congruence_close(t, {})
                                  : load_model(t, cfg.modelFile);
  validate_model(t, m);
  AxiomCertification ac = certify_axioms(t, m);
  if (ac.failedAxiom) {
    diag << "axiom not fp-certified: " << print(t.axioms()[*ac.failedAxiom]) << "\n";
    return 1;
  }
  for (const auto& file : cfg.goalFiles) {
    GoalFile g = parse_goal_file(slurp(file));
    ExtractionResult r =
        extract(t, m, ac.certificates, Judgement{t.view(), {}, {}, g.goal}, g.proof);
    diag << print(g.goal) << "\n  ";
    switch (r.payloadKind) {
      case ExtractionResult::Payload::Witness: {
        diag << "witness:";
        for (const auto& [v, c] : r.witnesses) diag << " " << v << " = " << c;
        break;
      }
      case ExtractionResult::Payload::Disjunct:
        diag << "disjunct: " << (*r.disjunct == 0 ? "left" : "right");
        break;
      case ExtractionResult::Payload::Plain:
        diag << "plain";
        break;
    }
    diag << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// glue

int cmd_glue(const RunConfig& cfg, std::ostream& diag) {
  Theory t = load_theory(cfg.theoryFile, cfg);
  FiniteCategory tiny = load_category(cfg.categoryFile);
  TermCompleteExtension e = term_complete_extension(t, cfg.budget);
  GlobalSections gs = global_sections(e, cfg.terminal);
  FreydCategory f = comma_glue(tiny, e, gs);
  Theory star = star_theory(f);
  Model m = freyd_model(f, star);
  validate_model(star, m);
  diag << "glued " << f.objects.size() << " objects, " << f.arrows.size()
       << " arrows over " << tiny.name << "\n";
  if (!cfg.outDir.empty()) {
    std::filesystem::create_directories(cfg.outDir);
    spit(cfg.outDir / "star.thy",
         print_theory(star.name(), star.signature(), star.explicit_axioms()));
    spit(cfg.outDir / "model.mdl", print_model_classes(m.classes));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// pipeline

int cmd_pipeline(const RunConfig& cfg, std::ostream& diag) {
  Theory t = load_theory(cfg.theoryFile, cfg);
  diag << "theory " << t.name() << " (" << t.signature().arrows.size()
       << " arrow constants)\n";

  FiniteCategory tiny = load_category(cfg.categoryFile);
  diag << "category " << tiny.name << " (" << tiny.objects.size() << " objects, "
       << tiny.arrows.size() << " arrows)\n";

  TermCompleteExtension e = term_complete_extension(t, cfg.budget);
  diag << "term completion: budget " << cfg.budget << ", merged "
       << e.merged.size() << " constants\n";

  GlobalSections gs = global_sections(e, cfg.terminal);
  FreydCategory f = comma_glue(tiny, e, gs);
  diag << "glued category: " << f.objects.size() << " objects, " << f.arrows.size()
       << " arrows\n";

  Theory star = star_theory(f);
  Model m = freyd_model(f, star);
  validate_model(star, m);

  AxiomCertification ac = certify_axioms(star, m);
  if (ac.failedAxiom) {
    diag << "abort: axiom not fp-certified: "
         << print(star.axioms()[*ac.failedAxiom]) << "\n";
    return 1;
  }
  diag << "axioms fp-certified: " << ac.certificates.size() << "\n";

  Subst section = star_section(f);
  std::vector<std::pair<Proof, Formula>> goals;
  for (const auto& file : cfg.goalFiles) {
    GoalFile g = parse_goal_file(slurp(file));
    check_proof(Judgement{t.view(), {}, {}, g.goal}, g.proof);
    goals.emplace_back(substitute(g.proof, section), substitute(g.goal, section));
  }
  CriterionReport report = run_criterion(star, m, ac.certificates, goals);

  // reports
  std::ostringstream human;
  human << "pipeline report\n";
  human << "  theory:   " << t.name() << "\n";
  human << "  category: " << tiny.name << "\n";
  human << "  glued:    " << f.objects.size() << " objects, " << f.arrows.size()
        << " arrows\n";
  human << "  axioms:   " << ac.certificates.size() << " fp-certified\n";
  human << "  goals:    " << report.goals.size() << "\n";
  nlohmann::json jgoals = nlohmann::json::array();
  for (std::size_t i = 0; i < report.goals.size(); ++i) {
    const GoalOutcome& g = report.goals[i];
    human << "  [" << i << "] " << print(g.goal) << "\n";
    nlohmann::json jg;
    jg["digest"] = g.goalDigest;
    jg["goal"] = print(g.goal);
    switch (g.result.payloadKind) {
      case ExtractionResult::Payload::Witness: {
        human << "      witness:";
        nlohmann::json w = nlohmann::json::array();
        for (const auto& [v, c] : g.result.witnesses) {
          human << " " << v << " = " << c;
          w.push_back({{"variable", v}, {"constant", c}});
        }
        human << "\n";
        jg["payload"] = {{"kind", "witness"}, {"assignment", w}};
        break;
      }
      case ExtractionResult::Payload::Disjunct:
        human << "      disjunct: " << (*g.result.disjunct == 0 ? "left" : "right")
              << "\n";
        jg["payload"] = {{"kind", "disjunct"},
                         {"side", *g.result.disjunct == 0 ? "left" : "right"}};
        break;
      case ExtractionResult::Payload::Plain:
        human << "      plain\n";
        jg["payload"] = {{"kind", "plain"}};
        break;
    }
    human << "      instantiated: " << print(g.result.instantiated) << "\n";
    jg["instantiated"] = print(g.result.instantiated);
    jg["certificate"] = "goal" + std::to_string(i) + ".cert.json";
    jgoals.push_back(std::move(jg));
  }
  human << "  consistency: " << (report.consistencyOk ? "ok" : "VIOLATED") << "\n";

  nlohmann::json jreport;
  jreport["theory"] = t.name();
  jreport["category"] = tiny.name;
  jreport["oracle"] = star.oracle().describe();
  jreport["budget"] = cfg.budget;
  jreport["glued"] = {{"objects", f.objects.size()}, {"arrows", f.arrows.size()}};
  jreport["axiomsCertified"] = ac.certificates.size();
  jreport["goals"] = std::move(jgoals);
  jreport["consistency"] = report.consistencyOk ? "ok" : "violated";

  if (!cfg.outDir.empty()) {
    std::filesystem::create_directories(cfg.outDir);
    spit(cfg.outDir / "report.txt", human.str());
    spit(cfg.outDir / "report.json", jreport.dump(2) + "\n");
    for (std::size_t i = 0; i < report.goals.size(); ++i) {
      spit(cfg.outDir / ("goal" + std::to_string(i) + ".cert.json"),
           certificate_json(report.goals[i].result.certificate).dump(2) + "\n");
    }
  }
  diag << human.str();
  return 0;
}

}  // namespace catlog
