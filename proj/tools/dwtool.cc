#include <dw/ca.hh>
#include <dw/error.hh>
#include <dw/fo.hh>
#include <dw/game.hh>
#include <dw/ltl.hh>
#include <dw/ltl2ra.hh>
#include <dw/nra_empty.hh>
#include <dw/ra.hh>
#include <dw/ra2ca.hh>
#include <dw/reductions.hh>
#include <dw/word.hh>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace dw;
using json = nlohmann::ordered_json;

namespace
{
  enum Exit
  {
    ExitFalse = 0,
    ExitTrue = 1,
    ExitUsage = 2,
    ExitParse = 3,
    ExitBudget = 4,
  };

  struct UsageError : std::runtime_error
  {
    using std::runtime_error::runtime_error;
  };

  /// Collects the fields of one result and prints them as `key: value`
  /// lines or as a single JSON object.
  class Report
  {
  public:
    explicit Report(bool as_json) : json_(as_json) {}

    template <typename T>
    void set(const std::string& key, const T& value)
    {
      doc_[key] = value;
    }

    /// Multi-line artifact (formula, automaton, DOT): printed verbatim in
    /// human mode.
    void text(const std::string& key, const std::string& body)
    {
      doc_[key] = body;
      texts_.push_back(key);
    }

    void print() const
    {
      if (json_)
        {
          std::cout << doc_.dump() << '\n';
          return;
        }
      for (auto it = doc_.begin(); it != doc_.end(); ++it)
        {
          if (std::find(texts_.begin(), texts_.end(), it.key()) != texts_.end())
            {
              const std::string body = it.value().get<std::string>();
              std::cout << body;
              if (!body.empty() && body.back() != '\n')
                std::cout << '\n';
              continue;
            }
          std::cout << it.key() << ": "
                    << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
                    << '\n';
        }
    }

  private:
    bool json_;
    json doc_ = json::object();
    std::vector<std::string> texts_;
  };

  struct Options
  {
    std::string format = "human";
    bool inline_text = false;
    std::string ltl, fo, ra, ca, word, alphabet;
    std::size_t pos = 0;
    std::size_t max_len = 4;
    std::size_t budget = default_ca_budget;
    bool infinite = false;
    std::string semantics = "incrementing";
    unsigned var = 0;
    std::optional<unsigned> m;
    std::string variant = "xffp";
    bool game = false, abstract = false;
    std::string input, words, output;
  };

  /// Writes an automaton to --output when given, else into the report.
  void emit_automaton(const Options& o, Report& r, const std::string& text)
  {
    if (o.output.empty())
      {
        r.text("automaton", text);
        return;
      }
    std::ofstream out(o.output);
    if (!out || !(out << text))
      throw UsageError("cannot write '" + o.output + "'");
    r.set("output", o.output);
  }

  std::string load(const std::string& arg, bool inline_text)
  {
    if (inline_text)
      return arg;
    std::ifstream in(arg);
    if (!in)
      throw UsageError("cannot read '" + arg + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::vector<std::string> split_symbols(const std::string& s)
  {
    std::string t = s;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    std::vector<std::string> out;
    for (std::string x; in >> x;)
      out.push_back(x);
    return out;
  }

  /// Letters of a data word literal (the part before ';').
  std::vector<std::string> word_symbols(const std::string& w)
  {
    return split_symbols(w.substr(0, w.find(';')));
  }

  Alphabet formula_alphabet(const Options& o, const std::string& text, bool fo_syntax)
  {
    if (!o.alphabet.empty())
      return Alphabet(split_symbols(o.alphabet));
    std::set<std::string> syms;
    if (!fo_syntax)
      {
        const auto inferred = parse_ltl_infer(text).first;
        syms.insert(inferred.symbols().begin(), inferred.symbols().end());
      }
    else
      {
        // Letter predicates are written Pa(x).
        for (std::size_t i = 0; (i = text.find('P', i)) != std::string::npos; ++i)
          {
            std::size_t j = i + 1;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
              ++j;
            if (j > i + 1 && j < text.size() && text[j] == '(')
              syms.insert(text.substr(i + 1, j - i - 1));
          }
      }
    for (auto& s : word_symbols(o.word))
      syms.insert(s);
    return Alphabet(std::vector<std::string>(syms.begin(), syms.end()));
  }

  std::string letters_text(const Alphabet& sigma, const std::vector<Letter>& w)
  {
    std::string out;
    for (auto l : w)
      out += (out.empty() ? "" : " ") + sigma.symbol(l);
    return out;
  }

  int verdict_exit(Verdict v)
  {
    return v == Verdict::Nonempty ? ExitTrue : v == Verdict::Empty ? ExitFalse : ExitBudget;
  }

  void describe(Report& r, const CounterAutomaton& c, const TriState& t)
  {
    r.set("verdict", verdict_name(t.verdict));
    r.set("certificate", t.certificate);
    r.set("explored", t.explored);
    if (t.nonempty())
      {
        r.set("word", letters_text(c.alphabet, letters_of(c, t.stem)));
        if (!t.cycle.empty())
          r.set("cycle", letters_text(c.alphabet, letters_of(c, t.cycle)));
      }
  }

  Semantics semantics(const Options& o)
  {
    if (o.semantics == "incrementing")
      return Semantics::Incrementing;
    if (o.semantics == "minsky")
      return Semantics::Minsky;
    throw UsageError("unknown semantics '" + o.semantics + "'");
  }

  int run_parse(const Options& o, Report& r)
  {
    if (!o.ltl.empty())
      {
        const auto text = load(o.ltl, o.inline_text);
        const auto sigma = formula_alphabet(o, text, false);
        const auto f = parse_ltl(text, sigma);
        const auto info = classify(f);
        std::string ops;
        for (auto op : info.operators)
          ops += (ops.empty() ? "" : " ") + std::string(op_name(op));
        r.set("kind", "ltl");
        r.set("formula", to_string(f, sigma));
        r.set("size", formula_size(f));
        r.set("registers", info.max_register);
        r.set("sentence", info.is_sentence);
        r.set("operators", ops);
        if (info.simple_m)
          r.set("simple_m", *info.simple_m);
      }
    else if (!o.fo.empty())
      {
        const auto text = load(o.fo, o.inline_text);
        const auto sigma = formula_alphabet(o, text, true);
        const auto f = parse_fo(text, sigma);
        r.set("kind", "fo");
        r.set("formula", to_string(f, sigma));
        r.set("two_variable", is_two_variable(f));
        r.set("depth", quantifier_depth(f));
        r.set("max_offset", max_offset(f));
      }
    else if (!o.ra.empty())
      {
        const auto a = parse_ra(load(o.ra, o.inline_text));
        const auto k = classify(a);
        r.set("kind", "ra");
        r.set("locations", a.size());
        r.set("registers", a.registers);
        r.set("one_way", k.one_way);
        r.set("nondeterministic", k.nondeterministic);
        r.set("universal", k.universal);
        r.text("automaton", format_ra(a));
      }
    else if (!o.ca.empty())
      {
        const auto c = parse_ca(load(o.ca, o.inline_text));
        r.set("kind", "ca");
        r.set("locations", c.size());
        r.set("counters", c.counters);
        r.set("transitions", c.delta.size());
        r.text("automaton", format_ca(c));
      }
    else
      throw UsageError("parse needs one of --ltl, --fo, --ra, --ca");
    return ExitFalse;
  }

  int run_eval(const Options& o, Report& r)
  {
    if (o.word.empty())
      throw UsageError("eval needs --word");
    bool value = false;
    if (!o.ltl.empty())
      {
        const auto text = load(o.ltl, o.inline_text);
        const auto sigma = formula_alphabet(o, text, false);
        const auto f = parse_ltl(text, sigma);
        const auto w = parse_data_word(o.word, sigma);
        if (o.pos >= w.length())
          fail(ErrorCode::PositionOutOfRange, "position " + std::to_string(o.pos) + " out of range");
        value = eval(w, o.pos, RegisterValuation(classify(f).max_register), f);
      }
    else if (!o.fo.empty())
      {
        const auto text = load(o.fo, o.inline_text);
        const auto sigma = formula_alphabet(o, text, true);
        const auto f = parse_fo(text, sigma);
        const auto w = parse_data_word(o.word, sigma);
        if (o.pos >= w.length())
          fail(ErrorCode::PositionOutOfRange, "position " + std::to_string(o.pos) + " out of range");
        FoAssignment asg(64);
        asg[o.var] = o.pos;
        value = eval_fo(w, asg, f);
      }
    else
      throw UsageError("eval needs --ltl or --fo");
    r.set("value", value);
    return value ? ExitTrue : ExitFalse;
  }

  int run_sat(const Options& o, Report& r)
  {
    if (o.ltl.empty())
      throw UsageError("sat-bounded needs --ltl");
    const auto text = load(o.ltl, o.inline_text);
    const auto sigma = formula_alphabet(o, text, false);
    const auto f = parse_ltl(text, sigma);
    const auto w = sat_bounded(f, sigma.size(), o.max_len);
    r.set("satisfiable", w.has_value());
    r.set("max_len", o.max_len);
    if (w)
      r.set("witness", format_data_word(*w, sigma));
    return w ? ExitTrue : ExitFalse;
  }

  int run_translate(const std::string& which, const Options& o, Report& r)
  {
    if (which == "ltl2ra")
      {
        const auto text = load(o.ltl, o.inline_text);
        const auto sigma = formula_alphabet(o, text, false);
        emit_automaton(o, r, format_ra(ltl_to_ara(parse_ltl(text, sigma), sigma)));
      }
    else if (which == "ra2ca")
      {
        const auto a = parse_ra(load(o.ra, o.inline_text));
        const auto res = o.infinite ? build_ca_infinite_detailed(a) : build_ca_finite_detailed(a);
        r.set("locations", res.report.locations);
        r.set("counters", res.report.counters);
        r.set("transitions", res.report.transitions);
        emit_automaton(o, r, format_ca(res.automaton));
      }
    else if (which == "fo2ltl")
      {
        const auto text = load(o.fo, o.inline_text);
        const auto sigma = formula_alphabet(o, text, true);
        r.set("formula", to_string(fo2_to_simple_ltl(parse_fo(text, sigma), o.var, o.m), sigma));
      }
    else if (which == "ltl2fo")
      {
        const auto text = load(o.ltl, o.inline_text);
        const auto sigma = formula_alphabet(o, text, false);
        r.set("formula", to_string(simple_ltl_to_fo2(parse_ltl(text, sigma), o.var), sigma));
      }
    return ExitFalse;
  }

  int run_accepts(const Options& o, Report& r)
  {
    if (o.word.empty())
      throw UsageError("accepts needs --word");
    if (!o.ra.empty())
      {
        const auto a = parse_ra(load(o.ra, o.inline_text));
        const bool v = accepts(a, parse_data_word(o.word, a.alphabet));
        r.set("accepted", v);
        return v ? ExitTrue : ExitFalse;
      }
    if (!o.ca.empty())
      {
        const auto c = parse_ca(load(o.ca, o.inline_text));
        std::vector<Letter> w;
        for (auto& s : word_symbols(o.word))
          w.push_back(c.alphabet.at(s));
        const auto t = accepts_word(c, w, semantics(o), o.budget);
        r.set("accepted", verdict_name(t.verdict));
        if (t.verdict == Verdict::Unknown)
          r.set("budget", t.certificate);
        return verdict_exit(t.verdict);
      }
    throw UsageError("accepts needs --ra or --ca");
  }

  int run_empty(const std::string& which, const Options& o, Report& r)
  {
    if (which == "nra")
      {
        const auto a = parse_ra(load(o.ra, o.inline_text));
        const auto v = o.infinite ? nonempty_infinite(a) : nonempty_finite(a);
        r.set("verdict", v.nonempty ? "nonempty" : "empty");
        r.set("explored", v.explored);
        if (v.witness)
          r.set("witness", format_data_word(*v.witness, a.alphabet));
        if (!v.reason.empty())
          r.set("reason", v.reason);
        return v.nonempty ? ExitTrue : ExitFalse;
      }
    const auto c = parse_ca(load(o.ca, o.inline_text));
    TriState t;
    if (semantics(o) == Semantics::Minsky)
      t = nonempty_minsky_bounded(c, o.infinite ? Words::Infinite : Words::Finite, o.budget);
    else if (o.infinite)
      t = nonempty_infinite_incrementing(c, o.budget);
    else
      t = nonempty_finite_incrementing(c, o.budget);
    describe(r, c, t);
    return verdict_exit(t.verdict);
  }

  void print_reduction(const Reduction& red, Report& r)
  {
    r.set("alphabet", letters_text(red.sigma.alphabet, [&] {
            std::vector<Letter> all(red.sigma.alphabet.size());
            for (Letter l = 0; l < all.size(); ++l)
              all[l] = l;
            return all;
          }()));
    r.set("size", formula_size(red.formula));
    r.text("formula", to_string(red.formula, red.sigma.alphabet));
  }

  int run_reduce(const std::string& which, const Options& o, Report& r)
  {
    const auto c = parse_ca(load(o.ca, o.inline_text));
    if (which == "ca2ltl")
      print_reduction(o.infinite ? ca_to_ltl_infinite(c) : ca_to_ltl_finite(c), r);
    else if (which == "ca2ura")
      r.text("automaton", format_ra(ca_to_ura1(c)));
    else if (o.variant == "xffp")
      print_reduction(minsky_to_ltl_xffp(c, o.infinite), r);
    else if (o.variant == "2reg")
      print_reduction(minsky_to_ltl_2reg(c, o.infinite), r);
    else if (o.variant == "fig4")
      r.text("automaton", format_ca(minsky_to_incrementing_fig4(c)));
    else
      throw UsageError("unknown variant '" + o.variant + "'");
    return ExitFalse;
  }

  int run_circle(const Options& o, Report& r)
  {
    const auto text = load(o.ltl, o.inline_text);
    const auto sigma = formula_alphabet(o, text, false);
    const auto phi = parse_ltl(text, sigma);

    const auto model = sat_bounded(phi, sigma.size(), o.max_len);
    r.set("logic", model ? "nonempty" : "none up to bound");
    if (model)
      r.set("logic_witness", format_data_word(*model, sigma));

    const auto c = build_ca_finite(ltl_to_ara(phi, sigma));
    const auto t = nonempty_finite_incrementing(c, o.budget);
    r.set("counter", verdict_name(t.verdict));
    r.set("counter_locations", c.size());
    if (t.nonempty())
      r.set("counter_witness", letters_text(c.alphabet, letters_of(c, t.stem)));
    else if (t.verdict == Verdict::Unknown)
      r.set("budget", t.certificate);

    // Back to logic: the run found above, encoded as a data word over the
    // transitions, must satisfy the sentence describing runs.
    std::string closing = "empty";
    if (t.nonempty())
      {
        const auto back = ca_to_ltl_finite(c);
        const auto w = encode_run(back.sigma, c, t.stem);
        LtlEvaluator ev(w);
        const bool ok = ev.eval(0, RegisterValuation(1), back.formula)
                        && project(back.sigma, w) == letters_of(c, t.stem);
        closing = ok ? "nonempty" : "model rejected";
      }
    else if (t.verdict == Verdict::Unknown)
      closing = "unknown";
    r.set("closing", closing);

    const bool agree = t.verdict != Verdict::Unknown && closing == verdict_name(t.verdict)
                       && (model.has_value() == t.nonempty());
    r.set("agree", agree);
    return verdict_exit(t.verdict);
  }

  int run_dot(const Options& o, Report& r)
  {
    if (!o.ca.empty())
      r.text("dot", to_dot(parse_ca(load(o.ca, o.inline_text))));
    else if (!o.ra.empty())
      {
        const auto a = parse_ra(load(o.ra, o.inline_text));
        if (o.game)
          {
            if (o.word.empty())
              throw UsageError("--game needs --word");
            const auto g = acceptance_game(a, parse_data_word(o.word, a.alphabet));
            const auto sol = solve(g.game);
            const auto& s = sol.winner[g.initial] == Player::P1 ? sol.strategy_p1 : sol.strategy_p2;
            r.text("dot", to_dot(g.game, &s));
          }
        else if (o.abstract)
          r.text("dot", abstract_graph_dot(a));
        else
          r.text("dot", to_dot(a));
      }
    else
      throw UsageError("export-dot needs --ra or --ca");
    return ExitFalse;
  }

  int exit_for(const Error& e)
  {
    switch (e.code())
      {
      case ErrorCode::SyntaxError:
      case ErrorCode::UnknownAtom:
      case ErrorCode::UnknownLetter:
      case ErrorCode::NotAPartition:
      case ErrorCode::EmptyWord:
      case ErrorCode::InvalidAutomaton:
      case ErrorCode::NotASentence:
      case ErrorCode::UnboundVariable:
        return ExitParse;
      case ErrorCode::StateSpaceBudgetExceeded:
      case ErrorCode::CapExceeded:
        return ExitBudget;
      default:
        return ExitUsage;
      }
  }
}

int main(int argc, char** argv)
{
  CLI::App app{"Freeze LTL, register automata and counter automata over data words"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output: human or json (one object per line)")
    ->check(CLI::IsMember({"human", "json"}));
  app.add_flag("--inline", o.inline_text, "Take --ltl/--fo/--ra/--ca values as text, not paths");

  auto inputs = [&](CLI::App* s, bool ltl, bool fo, bool ra, bool ca) {
    if (ltl)
      s->add_option("--ltl", o.ltl, "Freeze LTL formula file");
    if (fo)
      s->add_option("--fo", o.fo, "First-order formula file");
    if (ra)
      s->add_option("--ra", o.ra, "Register automaton file");
    if (ca)
      s->add_option("--ca", o.ca, "Counter automaton file");
    s->add_option("--alphabet", o.alphabet, "Letters, comma separated (default: inferred)");
  };

  auto* parse = app.add_subcommand("parse", "Parse an input and print its normal form");
  inputs(parse, true, true, true, true);

  auto* ev = app.add_subcommand("eval", "Evaluate a formula on a data word");
  inputs(ev, true, true, false, false);
  ev->add_option("--word", o.word, "Data word, e.g. \"a a b ; 0 2 | 1\"")->required();
  ev->add_option("--pos", o.pos, "Position (default 0)");
  ev->add_option("--var", o.var, "Free FO variable bound to --pos (default x0)");

  auto* sat = app.add_subcommand("sat-bounded", "Search models up to a length");
  inputs(sat, true, false, false, false);
  sat->add_option("--max-len", o.max_len, "Longest data word tried");

  auto* tr = app.add_subcommand("translate", "Translate between formalisms");
  tr->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> trs;
  for (const char* name : {"ltl2ra", "ra2ca", "fo2ltl", "ltl2fo"})
    {
      auto* s = tr->add_subcommand(name);
      inputs(s, true, true, true, false);
      s->add_flag("--infinite", o.infinite, "Buechi construction (ra2ca)");
      s->add_option("--var", o.var, "Free variable index j (fo2ltl, ltl2fo)");
      s->add_option("--m", o.m, "Offset bound m (fo2ltl)");
      s->add_option("input", o.input, "Input file (instead of --ltl/--fo/--ra)");
      s->add_option("--words", o.words, "finite or infinite (ra2ca)")
        ->check(CLI::IsMember({"finite", "infinite"}));
      s->add_option("-o,--output", o.output, "Write the automaton to a file");
      trs.emplace_back(name, s);
    }

  auto* acc = app.add_subcommand("accepts", "Membership of a word");
  inputs(acc, false, false, true, true);
  acc->add_option("--word", o.word, "Data word (RA) or letters (CA)")->required();
  acc->add_option("--semantics", o.semantics, "incrementing or minsky (CA)");
  acc->add_option("--budget", o.budget, "State budget (CA)");

  auto* emp = app.add_subcommand("empty", "Nonemptiness");
  emp->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> emps;
  for (const char* name : {"nra", "ca"})
    {
      auto* s = emp->add_subcommand(name);
      inputs(s, false, false, std::string(name) == "nra", std::string(name) == "ca");
      s->add_flag("--infinite", o.infinite, "Infinite words");
      s->add_option("input", o.input, "Automaton file (instead of --ra/--ca)");
      if (std::string(name) == "ca")
        {
          s->add_option("--semantics", o.semantics, "incrementing or minsky");
          s->add_option("--budget", o.budget, "Node budget");
        }
      emps.emplace_back(name, s);
    }

  auto* red = app.add_subcommand("reduce", "Counter automaton to logic or automata");
  red->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> reds;
  for (const char* name : {"ca2ltl", "ca2ura", "minsky2ltl"})
    {
      auto* s = red->add_subcommand(name);
      inputs(s, false, false, false, true);
      s->add_flag("--infinite", o.infinite, "Infinite words");
      s->add_option("--variant", o.variant, "xffp, 2reg or fig4 (minsky2ltl)")
        ->check(CLI::IsMember({"xffp", "2reg", "fig4"}));
      s->add_option("input", o.input, "Counter automaton file (instead of --ca)");
      reds.emplace_back(name, s);
    }

  auto* circ = app.add_subcommand("circle", "Logic to automata to counters and back");
  inputs(circ, true, false, false, false);
  circ->add_option("--max-len", o.max_len, "Longest data word tried by the logic search");
  circ->add_option("--budget", o.budget, "Counter search budget");

  auto* dot = app.add_subcommand("export-dot", "Graphviz output");
  inputs(dot, false, false, true, true);
  dot->add_flag("--game", o.game, "Acceptance game of --ra on --word");
  dot->add_flag("--abstract", o.abstract, "Abstract state graph of --ra");
  dot->add_option("--word", o.word, "Data word for --game");

  try
    {
      app.parse(argc, argv);
    }
  catch (const CLI::ParseError& e)
    {
      const int code = app.exit(e);
      return code == 0 ? 0 : ExitUsage;
    }

  if (o.words == "infinite")
    o.infinite = true;
  if (!o.input.empty())
    {
      for (const auto& [name, s] : trs)
        if (s->parsed())
          (name == "ra2ca" ? o.ra : name == "fo2ltl" ? o.fo : o.ltl) = o.input;
      for (const auto& [name, s] : emps)
        if (s->parsed())
          (name == "nra" ? o.ra : o.ca) = o.input;
      for (const auto& [name, s] : reds)
        if (s->parsed())
          o.ca = o.input;
    }

  Report r(o.format == "json");
  int code = ExitUsage;
  try
    {
      if (parse->parsed())
        code = run_parse(o, r);
      else if (ev->parsed())
        code = run_eval(o, r);
      else if (sat->parsed())
        code = run_sat(o, r);
      else if (acc->parsed())
        code = run_accepts(o, r);
      else if (circ->parsed())
        code = run_circle(o, r);
      else if (dot->parsed())
        code = run_dot(o, r);
      for (auto& [name, s] : trs)
        if (s->parsed())
          code = run_translate(name, o, r);
      for (auto& [name, s] : emps)
        if (s->parsed())
          code = run_empty(name, o, r);
      for (auto& [name, s] : reds)
        if (s->parsed())
          code = run_reduce(name, o, r);
    }
  catch (const Error& e)
    {
      std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << '\n';
      return exit_for(e);
    }
  catch (const UsageError& e)
    {
      std::cerr << "error: " << e.what() << '\n';
      return ExitUsage;
    }
  r.print();
  return code;
}
