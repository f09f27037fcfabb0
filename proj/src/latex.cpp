#include "rwkit/latex.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace rwkit {

namespace {

const std::map<std::string, std::string> kNames = {
    {"eps", "\\varepsilon"},   {"kappa0", "\\kappa^{0}"},
    {"kappa1", "\\kappa^{1}"}, {"Omega", "\\Omega"},
    {"Gamma", "\\Gamma"},      {"OmegaSharp", "\\Omega^{\\sharp}"},
    {"GammaSharp", "\\Gamma^{\\sharp}"}, {"Omega1", "\\Omega^{1}"},
    {"Gamma1", "\\Gamma^{1}"}, {"xsharp", "x^{\\sharp}"},
    {"ueps", "u^{\\varepsilon}"}, {"aeps", "a^{\\varepsilon}"},
    {"u1t", "\\tilde{u}^{1}"}, {"theta1", "\\theta^{1}"},
    {"aH", "a^{H}"},           {"fH", "f^{H}"},
    {"eta", "\\eta"},          {"delta", "\\delta"},
    {"phi", "\\varphi"},       {"Ow", "O_{w}"},
    {"Os", "O_{s}"},
};

std::string pretty(const std::string& name) {
  auto it = kNames.find(name);
  if (it != kNames.end()) return it->second;
  // trailing digits become a superscript: u0 -> u^{0}
  size_t i = name.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(name[i - 1]))) --i;
  if (i > 0 && i < name.size()) {
    return name.substr(0, i) + "^{" + name.substr(i) + "}";
  }
  return name;
}

struct Renderer {
  std::ostringstream os;

  void render(const TermPtr& t) {
    if (t->is_var()) {
      os << "\\mathit{?" << t->var_name() << "}";
      return;
    }
    const std::string& h = t->head().name;
    if (t->arity() == 0) {
      os << pretty(h);
      return;
    }
    if (h == "Var") {
      render(t->children()[0]);
      return;
    }
    if (h == "IndexedVar" || h == "IndexedFun" || h == "IndexedReg") {
      render(t->children()[0]);
      os << "_{";
      render(t->children()[1]);
      os << "}";
      return;
    }
    if (h == "Fun") {
      render(t->children()[0]);
      auto vars = list_items(t->children()[1]);
      if (!vars.empty()) {
        os << "(";
        for (size_t i = 0; i < vars.size(); ++i) {
          if (i) os << ",";
          render(vars[i]);
        }
        os << ")";
      }
      return;
    }
    if (h == "Reg") {
      render(t->children()[0]);
      return;
    }
    if (h == "plus") {
      render(t->children()[0]);
      os << " + ";
      render(t->children()[1]);
      return;
    }
    if (h == "minus") {
      render(t->children()[0]);
      os << " - ";
      renderGrouped(t->children()[1]);
      return;
    }
    if (h == "neg") {
      os << "-";
      renderGrouped(t->children()[0]);
      return;
    }
    if (h == "times") {
      renderGrouped(t->children()[0]);
      os << "\\, ";
      renderGrouped(t->children()[1]);
      return;
    }
    if (h == "divide") {
      os << "\\frac{";
      render(t->children()[0]);
      os << "}{";
      render(t->children()[1]);
      os << "}";
      return;
    }
    if (h == "pow") {
      renderGrouped(t->children()[0]);
      os << "^{";
      render(t->children()[1]);
      os << "}";
      return;
    }
    if (h == "M") {
      os << "\\mathbb{M}(";
      render(t->children()[0]);
      os << ",";
      render(t->children()[1]);
      os << ")";
      return;
    }
    if (h == "Oper") {
      renderOper(t);
      return;
    }
    os << pretty(h) << "(";
    for (int i = 0; i < t->arity(); ++i) {
      if (i) os << ",";
      render(t->children()[i]);
    }
    os << ")";
  }

  void renderGrouped(const TermPtr& t) {
    bool group = !t->is_var() &&
                 (t->head().name == "plus" || t->head().name == "minus" ||
                  t->head().name == "neg");
    if (group) os << "\\left(";
    render(t);
    if (group) os << "\\right)";
  }

  void renderArgs(const TermPtr& args) {
    if (is_list_term(args)) {
      auto items = list_items(args);
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) os << ",";
        render(items[i]);
      }
      return;
    }
    render(args);
  }

  static TermPtr var_region(const TermPtr& v) {
    TermPtr cur = v;
    while (!cur->is_var() && cur->head().name == "IndexedVar") {
      cur = cur->children()[0];
    }
    if (!cur->is_var() && cur->head().name == "Var") {
      return cur->children()[1];
    }
    return nullptr;
  }

  void renderOper(const TermPtr& t) {
    const std::string name = t->children()[0]->head().name;
    const TermPtr& args = t->children()[1];
    auto dom = list_items(t->children()[2]);
    auto cod = list_items(t->children()[3]);
    if (name == "Integral" && dom.size() == 1) {
      os << "\\int";
      if (TermPtr reg = var_region(dom[0])) {
        if (!reg->is_var() && reg->head().name == "Reg") {
          os << "_{";
          render(reg->children()[0]);
          os << "}";
        }
      }
      os << " ";
      renderArgs(args);
      os << " \\,d";
      render(dom[0]);
      return;
    }
    if (name == "Partial" && dom.size() == 1) {
      os << "\\frac{\\partial}{\\partial ";
      render(dom[0]);
      os << "}\\!\\left(";
      renderArgs(args);
      os << "\\right)";
      return;
    }
    if (name == "Restriction") {
      os << "tr\\!\\left(";
      renderArgs(args);
      os << "\\right)";
      return;
    }
    if (name == "Sum" && dom.size() == 1) {
      os << "\\sum_{";
      render(dom[0]);
      os << "} ";
      renderArgs(args);
      return;
    }
    if (name == "Equals") {
      auto items = list_items(args);
      if (items.size() == 2) {
        render(items[0]);
        os << " = ";
        render(items[1]);
        return;
      }
    }
    if (name == "Periodic") {
      renderArgs(args);
      os << " \\text{ is periodic in } ";
      if (!dom.empty()) render(dom[0]);
      return;
    }
    // T, Tstar, B and anything else: operator-application form
    os << (name == "Tstar" ? "T^{*}" : pretty(name)) << "(";
    renderArgs(args);
    os << ")";
    if (!cod.empty()) {
      os << "(";
      for (size_t i = 0; i < cod.size(); ++i) {
        if (i) os << ",";
        render(cod[i]);
      }
      os << ")";
    }
    return;
  }
};

}  // namespace

std::string to_latex(const TermPtr& t) {
  Renderer r;
  r.render(t);
  return r.os.str();
}

}  // namespace rwkit
