#include "uncover/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace uncover {

const NamedGraph* Model::find_graph(std::string_view name) const {
    for (const auto& g : graphs)
        if (g.name == name)
            return &g;
    return nullptr;
}

const Rule* Model::find_rule(std::string_view name) const {
    for (const auto& r : rules)
        if (r.name() == name)
            return &r;
    return nullptr;
}

namespace {

struct Token {
    enum Kind { Ident, Symbol, End } kind = End;
    std::string text;
    std::size_t line = 0;
    std::size_t col = 0;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
}

class Parser {
public:
    Parser(std::string_view text, std::string_view source) : source_(source) { tokenize(text); }

    Model parse() {
        auto sig = std::make_shared<Signature>();
        sig_ = sig;
        model_.signature = sig;
        while (peek().kind != Token::End) {
            const Token& t = peek();
            if (accept(";"))
                continue;
            if (t.kind != Token::Ident)
                fail(Errc::ParseError, t, "expected a declaration, found '" + t.text + "'");
            if (t.text == "sig")
                parse_sig(*sig);
            else if (t.text == "graph")
                parse_graph_decl();
            else if (t.text == "rule")
                parse_rule();
            else if (t.text == "analysis")
                parse_analysis();
            else
                fail(Errc::ParseError, t, "unknown declaration '" + t.text + "'");
        }
        if (model_.analysis && model_.analysis->order == OrderKind::InducedSubgraph && !sig->all_binary())
            fail(Errc::NotDirectedGraph, analysis_token_,
                 "the induced order needs every label to have arity 2 (encode unary labels as loops)");
        return std::move(model_);
    }

private:
    void tokenize(std::string_view text) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < text.size();) {
            const char c = text[i];
            if (c == '\n') {
                ++line;
                col = 1;
                ++i;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                ++col;
                continue;
            }
            if (c == '#') {
                while (i < text.size() && text[i] != '\n')
                    ++i;
                continue;
            }
            Token t;
            t.line = line;
            t.col = col;
            if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
                t.kind = Token::Symbol;
                t.text = "->";
                i += 2;
                col += 2;
            } else if (std::string_view("{}(),;").find(c) != std::string_view::npos) {
                t.kind = Token::Symbol;
                t.text = std::string(1, c);
                ++i;
                ++col;
            } else if (ident_char(c)) {
                t.kind = Token::Ident;
                while (i < text.size() && ident_char(text[i])) {
                    t.text += text[i++];
                    ++col;
                }
            } else {
                Token bad{Token::Symbol, std::string(1, c), line, col};
                fail(Errc::ParseError, bad, "unexpected character '" + bad.text + "'");
            }
            tokens_.push_back(std::move(t));
        }
        Token end;
        end.line = line;
        end.col = col;
        tokens_.push_back(end);
    }

    [[noreturn]] void fail(Errc code, const Token& at, const std::string& message) const {
        throw Error(code, std::string(source_) + ":" + std::to_string(at.line) + ":" + std::to_string(at.col) +
                              ": " + message);
    }

    const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < tokens_.size() - 1)
            ++pos_;
        return t;
    }
    bool accept(std::string_view symbol) {
        if (peek().kind == Token::Symbol && peek().text == symbol) {
            next();
            return true;
        }
        return false;
    }
    const Token& expect(std::string_view symbol) {
        if (peek().kind != Token::Symbol || peek().text != symbol)
            fail(Errc::ParseError, peek(), "expected '" + std::string(symbol) + "', found '" + describe(peek()) + "'");
        return next();
    }
    const Token& ident(std::string_view what) {
        if (peek().kind != Token::Ident)
            fail(Errc::ParseError, peek(), "expected " + std::string(what) + ", found '" + describe(peek()) + "'");
        return next();
    }
    std::size_t number(std::string_view what) {
        const Token& t = ident(what);
        if (t.text.empty() || !std::all_of(t.text.begin(), t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            fail(Errc::ParseError, t, "expected " + std::string(what) + ", found '" + t.text + "'");
        return std::stoul(t.text);
    }
    static std::string describe(const Token& t) { return t.kind == Token::End ? "end of input" : t.text; }
    // Optional statement terminator.
    void end_statement() { accept(";"); }

    void parse_sig(Signature& sig) {
        next();
        const Token& name = ident("a label name");
        const std::size_t arity = number("an arity");
        if (sig.find(name.text))
            fail(Errc::DuplicateName, name, "label '" + name.text + "' declared twice");
        sig.add(name.text, static_cast<unsigned>(arity));
        end_statement();
    }

    NamedGraph parse_graph_body(const std::string& name) {
        NamedGraph g{name, Hypergraph(sig_), {}, {}};
        expect("{");
        while (!accept("}")) {
            if (accept(";"))
                continue;
            const Token& kw = ident("'node' or 'edge'");
            if (kw.text == "node") {
                do {
                    const Token& id = ident("a node name");
                    if (std::find(g.node_names.begin(), g.node_names.end(), id.text) != g.node_names.end())
                        fail(Errc::DuplicateName, id, "node '" + id.text + "' declared twice");
                    g.node_names.push_back(id.text);
                    g.graph.add_node();
                } while (accept(","));
                end_statement();
            } else if (kw.text == "edge") {
                parse_edge(g);
            } else {
                fail(Errc::ParseError, kw, "expected 'node' or 'edge', found '" + kw.text + "'");
            }
        }
        return g;
    }

    // edge [<id>] <label> (<node>, ...)
    void parse_edge(NamedGraph& g) {
        const Token* id = &ident("an edge name or label");
        const Token* label = id;
        if (!(peek().kind == Token::Symbol && peek().text == "("))
            label = &ident("an edge label");
        else
            id = nullptr;
        const std::string name = id ? id->text : "_e" + std::to_string(g.graph.edge_count());
        if (id && std::find(g.edge_names.begin(), g.edge_names.end(), name) != g.edge_names.end())
            fail(Errc::DuplicateName, *id, "edge '" + name + "' declared twice");
        const auto l = sig_->find(label->text);
        if (!l)
            fail(Errc::UndeclaredReference, *label, "undeclared label '" + label->text + "'");
        const Token& open = expect("(");
        std::vector<NodeId> conn;
        if (!accept(")")) {
            do {
                const Token& v = ident("a node name");
                auto it = std::find(g.node_names.begin(), g.node_names.end(), v.text);
                if (it == g.node_names.end())
                    fail(Errc::UndeclaredReference, v, "undeclared node '" + v.text + "'");
                conn.push_back(static_cast<NodeId>(it - g.node_names.begin()));
            } while (accept(","));
            expect(")");
        }
        if (conn.size() != sig_->arity(*l))
            fail(Errc::ArityMismatch, open,
                 "label '" + label->text + "' has arity " + std::to_string(sig_->arity(*l)) + ", got " +
                     std::to_string(conn.size()) + " endpoints");
        g.graph.add_edge(*l, std::move(conn));
        g.edge_names.push_back(name);
        end_statement();
    }

    void parse_graph_decl() {
        next();
        const Token& name = ident("a graph name");
        if (model_.find_graph(name.text))
            fail(Errc::DuplicateName, name, "graph '" + name.text + "' declared twice");
        model_.graphs.push_back(parse_graph_body(name.text));
        end_statement();
    }

    NamedGraph graph_operand(const std::string& fallback_name) {
        if (peek().kind == Token::Symbol && peek().text == "{")
            return parse_graph_body(fallback_name);
        const Token& ref = ident("a graph name or '{'");
        const NamedGraph* g = model_.find_graph(ref.text);
        if (!g)
            fail(Errc::UndeclaredReference, ref, "undeclared graph '" + ref.text + "'");
        return *g;
    }

    static int index_of(const std::vector<std::string>& names, const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        return it == names.end() ? kUndefined : static_cast<int>(it - names.begin());
    }

    void parse_rule() {
        next();
        const Token& name = ident("a rule name");
        if (model_.find_rule(name.text))
            fail(Errc::DuplicateName, name, "rule '" + name.text + "' declared twice");
        std::optional<NamedGraph> lhs, rhs;
        struct Pending {
            bool node;
            Token from, to;
        };
        std::vector<Pending> maps;
        std::vector<std::pair<Token, NamedGraph>> nacs;
        expect("{");
        while (!accept("}")) {
            if (accept(";"))
                continue;
            const Token& kw = ident("a rule item");
            if (kw.text == "lhs" || kw.text == "rhs") {
                auto& slot = kw.text == "lhs" ? lhs : rhs;
                if (slot)
                    fail(Errc::DuplicateName, kw, kw.text + " given twice");
                slot = graph_operand(kw.text);
                end_statement();
            } else if (kw.text == "map") {
                const Token& what = ident("'node' or 'edge'");
                if (what.text != "node" && what.text != "edge")
                    fail(Errc::ParseError, what, "expected 'node' or 'edge' after 'map'");
                Token from = ident("a left-hand side name");
                expect("->");
                Token to = ident("a right-hand side name");
                maps.push_back(Pending{what.text == "node", from, to});
                end_statement();
            } else if (kw.text == "nac") {
                if (!lhs)
                    fail(Errc::ParseError, kw, "a nac must follow the lhs");
                NamedGraph pattern = *lhs;
                pattern.name = "nac";
                expect("{");
                while (!accept("}")) {
                    if (accept(";"))
                        continue;
                    const Token& item = ident("'edge'");
                    if (item.text == "node")
                        fail(Errc::ParseError, item, "a nac may only forbid edges, not nodes");
                    if (item.text != "edge")
                        fail(Errc::ParseError, item, "expected 'edge' in a nac");
                    parse_edge(pattern);
                }
                nacs.emplace_back(kw, std::move(pattern));
                end_statement();
            } else {
                fail(Errc::ParseError, kw, "unknown rule item '" + kw.text + "'");
            }
        }
        if (!lhs)
            fail(Errc::ParseError, name, "rule '" + name.text + "' has no lhs");
        if (!rhs)
            fail(Errc::ParseError, name, "rule '" + name.text + "' has no rhs");

        PartialMorphism span = PartialMorphism::undefined_between(lhs->graph, rhs->graph);
        for (const auto& m : maps) {
            const auto& from_names = m.node ? lhs->node_names : lhs->edge_names;
            const auto& to_names = m.node ? rhs->node_names : rhs->edge_names;
            const int from = index_of(from_names, m.from.text);
            const int to = index_of(to_names, m.to.text);
            const std::string kind = m.node ? "node" : "edge";
            if (from == kUndefined)
                fail(Errc::UndeclaredReference, m.from, "no lhs " + kind + " '" + m.from.text + "'");
            if (to == kUndefined)
                fail(Errc::UndeclaredReference, m.to, "no rhs " + kind + " '" + m.to.text + "'");
            auto& slot = (m.node ? span.node_map : span.edge_map)[static_cast<std::size_t>(from)];
            if (slot != kUndefined)
                fail(Errc::DuplicateName, m.from, kind + " '" + m.from.text + "' mapped twice");
            slot = to;
        }
        if (auto err = check_morphism(span))
            fail(err->code(), name, "rule '" + name.text + "': " + err->what());

        std::vector<Nac> rule_nacs;
        for (auto& [kw, pattern] : nacs) {
            (void)kw;
            PartialMorphism embedding = PartialMorphism::undefined_between(lhs->graph, pattern.graph);
            for (std::size_t v = 0; v < lhs->graph.node_count(); ++v)
                embedding.node_map[v] = static_cast<int>(v);
            for (std::size_t e = 0; e < lhs->graph.edge_count(); ++e)
                embedding.edge_map[e] = static_cast<int>(e);
            rule_nacs.push_back(Nac{pattern.graph, std::move(embedding)});
        }
        model_.rules.emplace_back(name.text, std::move(span), std::move(rule_nacs));
        end_statement();
    }

    // Identifiers following a keyword on the same line.
    std::vector<Token> same_line_idents(const Token& kw) {
        std::vector<Token> out;
        while (peek().kind == Token::Ident && peek().line == kw.line)
            out.push_back(next());
        return out;
    }

    void parse_analysis() {
        analysis_token_ = next();
        if (model_.analysis)
            fail(Errc::DuplicateName, analysis_token_, "second analysis block");
        AnalysisSpec spec;
        bool have_order = false;
        expect("{");
        while (!accept("}")) {
            if (accept(";"))
                continue;
            const Token& kw = ident("an analysis item");
            if (kw.text == "order") {
                const Token& o = ident("an order");
                auto order = parse_order(o.text);
                if (!order)
                    fail(Errc::ParseError, o, "unknown order '" + o.text + "' (subgraph, induced or minor)");
                spec.order = *order;
                have_order = true;
            } else if (kw.text == "variant") {
                const Token& at = peek();
                const std::size_t v = number("1 or 2");
                if (v != 1 && v != 2)
                    fail(Errc::ParseError, at, "variant must be 1 or 2");
                spec.variant = static_cast<int>(v);
            } else if (kw.text == "restrict") {
                const Token& kind = ident("none, path or pathmult");
                if (kind.text == "none") {
                    spec.restriction = AllGraphs{};
                } else if (kind.text == "path") {
                    const Token& at = peek();
                    const std::size_t k = number("a path bound");
                    if (k < 1)
                        fail(Errc::ParseError, at, "path bound must be at least 1");
                    spec.restriction = PathBound{k};
                } else if (kind.text == "pathmult") {
                    const std::size_t n = number("a path bound");
                    const Token& at = peek();
                    const std::size_t k = number("a multiplicity bound");
                    if (k < 1)
                        fail(Errc::ParseError, at, "multiplicity bound must be at least 1");
                    spec.restriction = PathAndMultBound{n, k};
                } else {
                    fail(Errc::ParseError, kind, "unknown restriction '" + kind.text + "'");
                }
            } else if (kw.text == "error" || kw.text == "initial") {
                auto names = same_line_idents(kw);
                if (kw.text == "error" && names.empty())
                    fail(Errc::ParseError, kw, "'error' needs at least one graph name");
                for (const auto& n : names) {
                    if (!model_.find_graph(n.text))
                        fail(Errc::UndeclaredReference, n, "undeclared graph '" + n.text + "'");
                    (kw.text == "error" ? spec.error_graphs : spec.initial_graphs).push_back(n.text);
                }
            } else if (kw.text == "assume") {
                const Token& what = ident("closed_under_reachability");
                if (what.text != "closed_under_reachability")
                    fail(Errc::ParseError, what, "unknown assumption '" + what.text + "'");
                spec.assume_closed_under_reachability = true;
            } else if (kw.text == "max_iterations") {
                spec.max_iterations = number("an iteration budget");
            } else {
                fail(Errc::ParseError, kw, "unknown analysis item '" + kw.text + "'");
            }
            end_statement();
        }
        if (!have_order)
            fail(Errc::MissingOrder, analysis_token_, "analysis block without 'order'");
        model_.analysis = std::move(spec);
        end_statement();
    }

    std::string_view source_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::shared_ptr<Signature> sig_;
    Model model_;
    Token analysis_token_;
};

} // namespace

Model parse_model(std::string_view text, std::string_view source) { return Parser(text, source).parse(); }

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::ParseError, path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str(), path);
}

AnalysisProblem make_problem(const Model& model) {
    if (!model.analysis)
        throw Error(Errc::MissingOrder, "the model has no analysis block");
    const AnalysisSpec& spec = *model.analysis;
    AnalysisProblem p;
    p.rules = model.rules;
    p.order = spec.order;
    p.variant = spec.variant;
    p.restriction = spec.restriction;
    p.assume_closed_under_reachability = spec.assume_closed_under_reachability;
    if (spec.max_iterations)
        p.max_iterations = *spec.max_iterations;
    for (const auto& name : spec.error_graphs)
        p.error_basis.push_back(model.find_graph(name)->graph);
    for (const auto& name : spec.initial_graphs)
        p.initial_graphs.push_back(model.find_graph(name)->graph);
    return p;
}

std::string serialize_signature(const Signature& sig) {
    std::ostringstream out;
    for (LabelId l = 0; l < sig.size(); ++l)
        out << "sig " << sig.name(l) << ' ' << sig.arity(l) << '\n';
    return out.str();
}

namespace {

void write_body(std::ostream& out, const Hypergraph& g, std::string_view indent) {
    out << "{\n";
    if (g.node_count() > 0) {
        out << indent << "  node ";
        for (NodeId v = 0; v < g.node_count(); ++v)
            out << (v ? ", n" : "n") << v;
        out << '\n';
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        out << indent << "  edge e" << e << ' ' << g.signature()->name(edge.label) << " (";
        for (std::size_t i = 0; i < edge.conn.size(); ++i)
            out << (i ? ", n" : "n") << edge.conn[i];
        out << ")\n";
    }
    out << indent << "}";
}

} // namespace

std::string serialize_graph(const Hypergraph& g, std::string_view name) {
    std::ostringstream out;
    out << "graph " << name << ' ';
    write_body(out, g, "");
    out << '\n';
    return out.str();
}

std::string serialize_rule(const Rule& rule) {
    std::ostringstream out;
    out << "rule " << rule.name() << " {\n  lhs ";
    write_body(out, rule.lhs(), "  ");
    out << "\n  rhs ";
    write_body(out, rule.rhs(), "  ");
    out << '\n';
    const auto& span = rule.span();
    for (std::size_t v = 0; v < span.node_map.size(); ++v)
        if (span.node_map[v] != kUndefined)
            out << "  map node n" << v << " -> n" << span.node_map[v] << '\n';
    for (std::size_t e = 0; e < span.edge_map.size(); ++e)
        if (span.edge_map[e] != kUndefined)
            out << "  map edge e" << e << " -> e" << span.edge_map[e] << '\n';
    for (const Nac& nac : rule.nacs()) {
        std::vector<bool> covered(nac.pattern.edge_count(), false);
        for (int e : nac.embedding.edge_map)
            covered[static_cast<std::size_t>(e)] = true;
        // Pattern nodes are renamed through the embedding back to lhs names.
        std::vector<int> back(nac.pattern.node_count(), kUndefined);
        for (std::size_t v = 0; v < nac.embedding.node_map.size(); ++v)
            back[static_cast<std::size_t>(nac.embedding.node_map[v])] = static_cast<int>(v);
        out << "  nac {\n";
        for (EdgeId e = 0; e < nac.pattern.edge_count(); ++e) {
            if (covered[e])
                continue;
            const Edge& edge = nac.pattern.edge(e);
            out << "    edge x" << e << ' ' << nac.pattern.signature()->name(edge.label) << " (";
            for (std::size_t i = 0; i < edge.conn.size(); ++i)
                out << (i ? ", n" : "n") << back[edge.conn[i]];
            out << ")\n";
        }
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

std::string serialize_model(const Model& model) {
    std::ostringstream out;
    if (model.signature)
        out << serialize_signature(*model.signature);
    for (const auto& g : model.graphs)
        out << serialize_graph(g.graph, g.name);
    for (const auto& r : model.rules)
        out << serialize_rule(r);
    if (model.analysis) {
        const auto& a = *model.analysis;
        out << "analysis {\n  order " << to_string(a.order) << "\n  variant " << a.variant << "\n  restrict "
            << describe(a.restriction) << "\n  error";
        for (const auto& n : a.error_graphs)
            out << ' ' << n;
        out << '\n';
        if (!a.initial_graphs.empty()) {
            out << "  initial";
            for (const auto& n : a.initial_graphs)
                out << ' ' << n;
            out << '\n';
        }
        if (a.assume_closed_under_reachability)
            out << "  assume closed_under_reachability\n";
        if (a.max_iterations)
            out << "  max_iterations " << *a.max_iterations << '\n';
        out << "}\n";
    }
    return out.str();
}

std::string to_dot(const Hypergraph& g, std::string_view name) {
    const auto& sig = g.signature();
    auto label_name = [&](LabelId l) { return sig ? sig->name(l) : std::to_string(l); };
    std::vector<std::string> node_labels(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        node_labels[v] = std::to_string(v);
    for (const auto& e : g.edges())
        if (e.conn.size() == 1)
            node_labels[e.conn[0]] += "\\n" + label_name(e.label);

    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n";
    for (NodeId v = 0; v < g.node_count(); ++v)
        out << "  n" << v << " [shape=circle,label=\"" << node_labels[v] << "\"];\n";
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        if (edge.conn.size() == 1)
            continue;
        if (edge.conn.size() == 2) {
            out << "  n" << edge.conn[0] << " -> n" << edge.conn[1] << " [label=\"" << label_name(edge.label)
                << "\"];\n";
            continue;
        }
        out << "  e" << e << " [shape=box,label=\"" << label_name(edge.label) << "\"];\n";
        for (std::size_t i = 0; i < edge.conn.size(); ++i)
            out << "  e" << e << " -> n" << edge.conn[i] << " [arrowhead=none,label=\"" << i + 1 << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace uncover
