#include <dw/error.hh>
#include <dw/ra.hh>

#include <map>
#include <sstream>

namespace dw
{
  namespace
  {
    std::vector<std::string> split_ws(const std::string& s)
    {
      std::istringstream in(s);
      std::vector<std::string> out;
      std::string t;
      while (in >> t)
        out.push_back(t);
      return out;
    }

    std::optional<unsigned> numbered(const std::string& tok, const std::string& prefix)
    {
      if (tok.size() <= prefix.size() || tok.compare(0, prefix.size(), prefix) != 0)
        return std::nullopt;
      unsigned v = 0;
      for (std::size_t i = prefix.size(); i < tok.size(); ++i)
        {
          if (tok[i] < '0' || tok[i] > '9')
            return std::nullopt;
          v = v * 10 + static_cast<unsigned>(tok[i] - '0');
        }
      return v;
    }

    struct PendingLine
    {
      std::string name;
      std::optional<unsigned> rank, height;
      std::vector<std::string> body;
      std::size_t line;
    };
  }

  RegisterAutomaton parse_ra(std::string_view text)
  {
    RegisterAutomaton a;
    std::optional<std::string> init;
    std::vector<PendingLine> lines;
    bool have_alphabet = false;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw))
      {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos)
          raw.resize(hash);
        auto toks = split_ws(raw);
        if (toks.empty())
          continue;
        auto where = " (line " + std::to_string(lineno) + ")";
        if (toks[0] == "alphabet:")
          {
            a.alphabet = Alphabet(std::vector<std::string>(toks.begin() + 1, toks.end()));
            have_alphabet = true;
            continue;
          }
        if (toks[0] == "registers:")
          {
            if (toks.size() != 2)
              fail(ErrorCode::SyntaxError, "registers: expects one number" + where);
            a.registers = static_cast<unsigned>(std::stoul(toks[1]));
            continue;
          }
        if (toks[0] == "init:")
          {
            if (toks.size() != 2)
              fail(ErrorCode::SyntaxError, "init: expects one location" + where);
            init = toks[1];
            continue;
          }
        PendingLine p;
        p.name = toks[0];
        p.line = lineno;
        std::size_t i = 1;
        for (; i < toks.size() && toks[i] != ":"; ++i)
          {
            if (auto r = numbered(toks[i], "rank="))
              p.rank = r;
            else if (auto h = numbered(toks[i], "height="))
              p.height = h;
            else
              fail(ErrorCode::SyntaxError, "unexpected '" + toks[i] + "'" + where);
          }
        if (i == toks.size())
          fail(ErrorCode::SyntaxError, "missing ':'" + where);
        p.body.assign(toks.begin() + static_cast<std::ptrdiff_t>(i) + 1, toks.end());
        lines.push_back(std::move(p));
      }
    if (!have_alphabet)
      fail(ErrorCode::SyntaxError, "missing alphabet: header");

    std::map<std::string, Location> index;
    for (auto& p : lines)
      {
        if (index.count(p.name))
          fail(ErrorCode::SyntaxError, "location '" + p.name + "' defined twice");
        index[p.name] = a.add(p.name, TransitionFormula::top(), p.rank.value_or(0),
                              p.height.value_or(0));
      }
    bool all_heights = true;
    for (auto& p : lines)
      {
        auto where = " (line " + std::to_string(p.line) + ")";
        auto loc = [&](const std::string& s) {
          auto it = index.find(s);
          if (it == index.end())
            fail(ErrorCode::SyntaxError, "unknown location '" + s + "'" + where);
          return it->second;
        };
        auto want = [&](std::size_t n) {
          if (p.body.size() != n)
            fail(ErrorCode::SyntaxError, "malformed transition formula" + where);
        };
        if (p.body.empty())
          fail(ErrorCode::SyntaxError, "empty transition formula" + where);
        const auto& op = p.body[0];
        TransitionFormula f;
        if (op == "true")
          want(1), f = TransitionFormula::top();
        else if (op == "false")
          want(1), f = TransitionFormula::bottom();
        else if (op == "and" || op == "or")
          {
            want(3);
            f = op == "and" ? TransitionFormula::conj(loc(p.body[1]), loc(p.body[2]))
                            : TransitionFormula::disj(loc(p.body[1]), loc(p.body[2]));
          }
        else if (op == "X" || op == "wX" || op == "Xp" || op == "wXp")
          {
            want(2);
            TfKind k = op == "X" ? TfKind::X : op == "wX" ? TfKind::WX
                                   : op == "Xp"           ? TfKind::Xp
                                                          : TfKind::WXp;
            f = TransitionFormula::move(k, loc(p.body[1]));
          }
        else if (auto r = numbered(op, "store"))
          {
            want(2);
            f = TransitionFormula::store(*r, loc(p.body[1]));
          }
        else if (op == "if")
          {
            want(6);
            if (p.body[2] != "then" || p.body[4] != "else")
              fail(ErrorCode::SyntaxError, "expected 'if B then q else q'" + where);
            const auto& b = p.body[1];
            TestKind t;
            std::uint32_t arg = 0;
            if (b == "beg")
              t = TestKind::Beg;
            else if (b == "end")
              t = TestKind::End;
            else if (auto r = numbered(b, "up"))
              t = TestKind::Reg, arg = *r;
            else if (auto l = a.alphabet.find(b))
              t = TestKind::Letter, arg = *l;
            else
              fail(ErrorCode::UnknownLetter, "unknown test '" + b + "'" + where);
            f = TransitionFormula::ite(t, arg, loc(p.body[3]), loc(p.body[5]));
          }
        else
          fail(ErrorCode::SyntaxError, "unknown transition formula '" + op + "'" + where);
        a.delta[index[p.name]] = f;
        all_heights = all_heights && p.height.has_value();
      }
    if (!init)
      {
        if (lines.empty())
          fail(ErrorCode::SyntaxError, "automaton has no locations");
        init = lines.front().name;
      }
    auto it = index.find(*init);
    if (it == index.end())
      fail(ErrorCode::SyntaxError, "unknown initial location '" + *init + "'");
    a.init = it->second;
    if (!all_heights)
      recompute_heights(a);
    require_valid(a);
    return a;
  }

  namespace
  {
    std::string formula_text(const RegisterAutomaton& a, const TransitionFormula& f)
    {
      auto n = [&](Location q) { return a.names.at(q); };
      switch (f.kind)
        {
        case TfKind::Top: return "true";
        case TfKind::Bottom: return "false";
        case TfKind::And: return "and " + n(f.q1) + " " + n(f.q2);
        case TfKind::Or: return "or " + n(f.q1) + " " + n(f.q2);
        case TfKind::X: return "X " + n(f.q1);
        case TfKind::WX: return "wX " + n(f.q1);
        case TfKind::Xp: return "Xp " + n(f.q1);
        case TfKind::WXp: return "wXp " + n(f.q1);
        case TfKind::Store: return "store" + std::to_string(f.arg) + " " + n(f.q1);
        case TfKind::Test:
          {
            std::string b;
            switch (f.test)
              {
              case TestKind::Letter: b = a.alphabet.symbol(f.arg); break;
              case TestKind::Beg: b = "beg"; break;
              case TestKind::End: b = "end"; break;
              case TestKind::Reg: b = "up" + std::to_string(f.arg); break;
              }
            return "if " + b + " then " + n(f.q1) + " else " + n(f.q2);
          }
        }
      return "?";
    }

    std::string dot_escape(const std::string& s)
    {
      std::string out;
      for (char c : s)
        {
          if (c == '"' || c == '\\')
            out += '\\';
          out += c;
        }
      return out;
    }
  }

  std::string format_ra(const RegisterAutomaton& a)
  {
    std::ostringstream out;
    out << "alphabet:";
    for (auto& s : a.alphabet.symbols())
      out << ' ' << s;
    out << "\nregisters: " << a.registers << "\ninit: " << a.names.at(a.init) << '\n';
    for (Location q = 0; q < a.size(); ++q)
      out << a.names[q] << " rank=" << a.rank[q] << " height=" << a.height[q] << " : "
          << formula_text(a, a.delta[q]) << '\n';
    return out.str();
  }

  std::string to_dot(const RegisterAutomaton& a)
  {
    std::ostringstream out;
    out << "digraph ra {\n  rankdir=LR;\n  init [shape=point];\n";
    for (Location q = 0; q < a.size(); ++q)
      {
        const auto& f = a.delta[q];
        std::string sym;
        switch (f.kind)
          {
          case TfKind::Top: sym = "T"; break;
          case TfKind::Bottom: sym = "F"; break;
          case TfKind::And: sym = "and"; break;
          case TfKind::Or: sym = "or"; break;
          case TfKind::X: sym = "X"; break;
          case TfKind::WX: sym = "wX"; break;
          case TfKind::Xp: sym = "Xp"; break;
          case TfKind::WXp: sym = "wXp"; break;
          case TfKind::Store: sym = "store" + std::to_string(f.arg); break;
          case TfKind::Test:
            sym = f.test == TestKind::Letter ? a.alphabet.symbol(f.arg)
                  : f.test == TestKind::Beg  ? "beg"
                  : f.test == TestKind::End  ? "end"
                                             : "up" + std::to_string(f.arg);
            break;
          }
        out << "  n" << q << " [shape=circle, label=\"" << dot_escape(sym) << "\", xlabel=\""
            << dot_escape(a.names[q]) << "\"];\n";
      }
    out << "  init -> n" << a.init << ";\n";
    for (Location q = 0; q < a.size(); ++q)
      {
        const auto& f = a.delta[q];
        if (f.kind == TfKind::Test)
          {
            out << "  n" << q << " -> n" << f.q1 << " [label=\"y\"];\n";
            out << "  n" << q << " -> n" << f.q2 << " [label=\"n\"];\n";
          }
        else
          for (auto t : f.targets())
            out << "  n" << q << " -> n" << t << ";\n";
      }
    out << "}\n";
    return out.str();
  }
}
