#include "causalmix/io.hpp"

#include "causalmix/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace causalmix {

namespace {

// ---------------------------------------------------------------------------
// BIF lexer and parser

struct Token {
    enum Kind { word, punct, end } kind = end;
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

bool is_punct(char c) {
    switch (c) {
        case '{': case '}': case '(': case ')': case '[': case ']': case ',': case ';': case '|':
            return true;
        default:
            return false;
    }
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t line = 1, column = 1, i = 0;
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k && i < text.size(); ++j, ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
        } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
        } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            const std::size_t l = line, col = column;
            advance(2);
            while (i < text.size() && !(text[i] == '*' && i + 1 < text.size() && text[i + 1] == '/')) advance(1);
            if (i >= text.size()) throw ParseError("unterminated comment", l, col);
            advance(2);
        } else if (c == '"') {
            Token t{Token::word, {}, line, column};
            advance(1);
            while (i < text.size() && text[i] != '"') {
                t.text.push_back(text[i]);
                advance(1);
            }
            if (i >= text.size()) throw ParseError("unterminated string", t.line, t.column);
            advance(1);
            tokens.push_back(std::move(t));
        } else if (is_punct(c)) {
            tokens.push_back({Token::punct, std::string(1, c), line, column});
            advance(1);
        } else {
            Token t{Token::word, {}, line, column};
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && !is_punct(text[i]) &&
                   text[i] != '"') {
                t.text.push_back(text[i]);
                advance(1);
            }
            tokens.push_back(std::move(t));
        }
    }
    tokens.push_back({Token::end, "end of input", line, column});
    return tokens;
}

struct VariableDecl {
    std::string name;
    std::vector<std::string> states;
    Token where;
};

struct ProbabilityDecl {
    std::string child;
    std::vector<std::string> parents;
    Token where;
    std::optional<std::vector<double>> table;
    std::optional<std::vector<double>> default_row;
    std::vector<std::pair<std::vector<std::string>, std::vector<double>>> rows;
    std::vector<Token> row_positions;
};

class BifParser {
public:
    explicit BifParser(std::string_view text) : tokens_(tokenize(text)) {}

    DiscreteBayesNet parse() {
        while (peek().kind != Token::end) {
            const Token& t = peek();
            if (t.kind == Token::word && t.text == "network") {
                parse_network();
            } else if (t.kind == Token::word && t.text == "variable") {
                parse_variable();
            } else if (t.kind == Token::word && t.text == "probability") {
                parse_probability();
            } else {
                fail("expected 'network', 'variable' or 'probability', found '" + t.text + "'", t);
            }
        }
        return build();
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (t.kind != Token::end) ++pos_;
        return t;
    }
    [[noreturn]] static void fail(const std::string& what, const Token& at) { throw ParseError(what, at.line, at.column); }

    void expect(const char* punct) {
        const Token& t = next();
        if (t.kind != Token::punct || t.text != punct) fail(std::string("expected '") + punct + "', found '" + t.text + "'", t);
    }
    bool accept(const char* punct) {
        if (peek().kind == Token::punct && peek().text == punct) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string word(const char* what) {
        const Token& t = next();
        if (t.kind != Token::word) fail(std::string("expected ") + what + ", found '" + t.text + "'", t);
        return t.text;
    }
    double number() {
        const Token& t = next();
        if (t.kind != Token::word) fail("expected a probability, found '" + t.text + "'", t);
        double value = 0.0;
        const char* first = t.text.data();
        const char* last = first + t.text.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) fail("malformed number '" + t.text + "'", t);
        return value;
    }
    std::vector<double> numbers_until_semicolon() {
        std::vector<double> out{number()};
        while (accept(",")) out.push_back(number());
        expect(";");
        return out;
    }
    void skip_statement() {
        while (peek().kind != Token::end && !(peek().kind == Token::punct && peek().text == ";")) next();
        expect(";");
    }

    void parse_network() {
        next();
        while (peek().kind == Token::word) next();  // name, possibly several words
        expect("{");
        while (!accept("}")) {
            if (peek().kind == Token::end) fail("unterminated network block", peek());
            skip_statement();
        }
    }

    void parse_variable() {
        next();
        VariableDecl decl;
        decl.where = peek();
        decl.name = word("a variable name");
        expect("{");
        bool typed = false;
        while (!accept("}")) {
            const Token& t = peek();
            if (t.kind == Token::word && t.text == "type") {
                next();
                const Token& kind = next();
                if (kind.text != "discrete") fail("only discrete variables are supported", kind);
                expect("[");
                const Token& count_token = peek();
                const double count = number();
                expect("]");
                expect("{");
                decl.states.push_back(word("a state name"));
                while (accept(",")) decl.states.push_back(word("a state name"));
                expect("}");
                expect(";");
                if (count != static_cast<double>(decl.states.size()))
                    fail("variable '" + decl.name + "' declares " + count_token.text + " states but lists " +
                             std::to_string(decl.states.size()),
                         count_token);
                typed = true;
            } else if (t.kind == Token::word && t.text == "property") {
                skip_statement();
            } else {
                fail("unexpected '" + t.text + "' in variable block", t);
            }
        }
        if (!typed) fail("variable '" + decl.name + "' has no type declaration", decl.where);
        if (index_.contains(decl.name)) fail("variable '" + decl.name + "' declared twice", decl.where);
        index_[decl.name] = variables_.size();
        variables_.push_back(std::move(decl));
    }

    void parse_probability() {
        next();
        ProbabilityDecl decl;
        expect("(");
        decl.where = peek();
        decl.child = word("a variable name");
        if (accept("|")) {
            decl.parents.push_back(word("a parent name"));
            while (accept(",")) decl.parents.push_back(word("a parent name"));
        }
        expect(")");
        expect("{");
        while (!accept("}")) {
            const Token& t = peek();
            if (t.kind == Token::word && t.text == "table") {
                next();
                decl.table = numbers_until_semicolon();
            } else if (t.kind == Token::word && t.text == "default") {
                next();
                decl.default_row = numbers_until_semicolon();
            } else if (t.kind == Token::word && t.text == "property") {
                skip_statement();
            } else if (t.kind == Token::punct && t.text == "(") {
                const Token at = t;
                next();
                std::vector<std::string> states{word("a parent state")};
                while (accept(",")) states.push_back(word("a parent state"));
                expect(")");
                decl.rows.emplace_back(std::move(states), numbers_until_semicolon());
                decl.row_positions.push_back(at);
            } else {
                fail("unexpected '" + t.text + "' in probability block", t);
            }
        }
        probabilities_.push_back(std::move(decl));
    }

    std::size_t lookup(const std::string& name, const Token& at) const {
        auto it = index_.find(name);
        if (it == index_.end()) fail("unknown variable '" + name + "'", at);
        return it->second;
    }

    static void check_row(std::vector<double>& row, std::size_t card, const std::string& child, const Token& at) {
        if (row.size() != card)
            fail("row for '" + child + "' has " + std::to_string(row.size()) + " entries, expected " +
                     std::to_string(card),
                 at);
        double sum = 0.0;
        for (double p : row) {
            if (p < 0.0) fail("negative probability for '" + child + "'", at);
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            std::ostringstream msg;
            msg << "probabilities for '" << child << "' sum to " << sum << ", not 1";
            fail(msg.str(), at);
        }
        for (double& p : row) p /= sum;
    }

    DiscreteBayesNet build() {
        const std::size_t n = variables_.size();
        std::vector<const ProbabilityDecl*> by_child(n, nullptr);
        for (const auto& p : probabilities_) {
            const std::size_t c = lookup(p.child, p.where);
            if (by_child[c] != nullptr) fail("second probability block for '" + p.child + "'", p.where);
            by_child[c] = &p;
        }
        std::vector<std::string> names;
        std::vector<std::vector<std::string>> states;
        for (const auto& v : variables_) {
            names.push_back(v.name);
            states.push_back(v.states);
        }
        std::vector<Arrow> edges;
        std::vector<std::vector<Vertex>> parents(n);
        for (Vertex c = 0; c < n; ++c) {
            if (by_child[c] == nullptr) fail("variable '" + names[c] + "' has no probability block", variables_[c].where);
            for (const auto& p : by_child[c]->parents) {
                const Vertex pv = lookup(p, by_child[c]->where);
                if (std::find(parents[c].begin(), parents[c].end(), pv) != parents[c].end())
                    fail("parent '" + p + "' listed twice", by_child[c]->where);
                parents[c].push_back(pv);
                edges.push_back({pv, c});
            }
        }
        Dag dag = Dag::from_arrows(names, edges);

        std::vector<std::shared_ptr<const Cpt>> cpts;
        for (Vertex c = 0; c < n; ++c) {
            const ProbabilityDecl& decl = *by_child[c];
            const std::size_t card = states[c].size();
            std::vector<std::size_t> pcards;
            for (Vertex p : parents[c]) pcards.push_back(states[p].size());
            const std::size_t configs =
                std::accumulate(pcards.begin(), pcards.end(), std::size_t{1}, std::multiplies<>());
            std::vector<double> table(configs * card, 0.0);
            std::vector<char> filled(configs, 0);

            if (decl.table) {
                // `table` lists the child state slowest and parent configurations fastest.
                if (decl.table->size() != configs * card)
                    fail("table for '" + decl.child + "' has " + std::to_string(decl.table->size()) +
                             " entries, expected " + std::to_string(configs * card),
                         decl.where);
                for (std::size_t r = 0; r < configs; ++r) {
                    std::vector<double> row(card);
                    for (std::size_t k = 0; k < card; ++k) row[k] = (*decl.table)[k * configs + r];
                    check_row(row, card, decl.child, decl.where);
                    std::copy(row.begin(), row.end(), table.begin() + static_cast<std::ptrdiff_t>(r * card));
                    filled[r] = 1;
                }
            }
            for (std::size_t i = 0; i < decl.rows.size(); ++i) {
                const auto& [key, values] = decl.rows[i];
                const Token& at = decl.row_positions[i];
                if (key.size() != parents[c].size())
                    fail("row for '" + decl.child + "' names " + std::to_string(key.size()) + " parent states, expected " +
                             std::to_string(parents[c].size()),
                         at);
                std::size_t config = 0;
                for (std::size_t k = 0; k < key.size(); ++k) {
                    const auto& pstates = states[parents[c][k]];
                    auto it = std::find(pstates.begin(), pstates.end(), key[k]);
                    if (it == pstates.end())
                        fail("unknown state '" + key[k] + "' of parent '" + names[parents[c][k]] + "'", at);
                    config = config * pcards[k] + static_cast<std::size_t>(it - pstates.begin());
                }
                std::vector<double> row = values;
                check_row(row, card, decl.child, at);
                std::copy(row.begin(), row.end(), table.begin() + static_cast<std::ptrdiff_t>(config * card));
                filled[config] = 1;
            }
            if (decl.default_row) {
                std::vector<double> row = *decl.default_row;
                check_row(row, card, decl.child, decl.where);
                for (std::size_t r = 0; r < configs; ++r) {
                    if (!filled[r]) {
                        std::copy(row.begin(), row.end(), table.begin() + static_cast<std::ptrdiff_t>(r * card));
                        filled[r] = 1;
                    }
                }
            }
            if (std::find(filled.begin(), filled.end(), 0) != filled.end())
                fail("probability block for '" + decl.child + "' does not cover every parent configuration", decl.where);
            cpts.push_back(std::make_shared<const Cpt>(c, parents[c], std::move(pcards), card, std::move(table)));
        }
        return DiscreteBayesNet(std::move(dag), std::move(states), std::move(cpts));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<VariableDecl> variables_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<ProbabilityDecl> probabilities_;
};

// ---------------------------------------------------------------------------
// CSV

constexpr std::string_view kLabelColumn = "__intervention";

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", line_no, line.size());
    fields.push_back(std::move(field));
    return fields;
}

std::vector<std::string_view> csv_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json edge_json(const UndirectedEdge& e, const std::vector<std::string>& v) {
    return nlohmann::json::array({v.at(e.a), v.at(e.b)});
}

nlohmann::json skeleton_json(const Skeleton& s, const std::vector<std::string>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : s) out.push_back(edge_json(e, v));
    return out;
}

UndirectedEdge edge_from_json(const nlohmann::json& j, const std::unordered_map<std::string, Vertex>& index) {
    if (!j.is_array() || j.size() != 2) throw ParseError("edge must be a two-element array");
    auto lookup = [&](const nlohmann::json& name) {
        auto it = index.find(name.get<std::string>());
        if (it == index.end()) throw ParseError("report names unknown vertex '" + name.get<std::string>() + "'");
        return it->second;
    };
    return UndirectedEdge::of(lookup(j[0]), lookup(j[1]));
}

}  // namespace

DiscreteBayesNet parse_bif(std::string_view text) { return BifParser(text).parse(); }

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("failed while writing '" + path.string() + "'");
}

DiscreteBayesNet load_bif(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_bif(text);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string write_samples(const SampleTable& table, const std::vector<std::vector<std::string>>& states) {
    if (states.size() != table.variable_count()) throw ModelError("write_samples: one state list per column needed");
    std::string out;
    for (std::size_t v = 0; v < table.variable_count(); ++v) {
        if (v) out.push_back(',');
        out += csv_field(table.variables()[v]);
    }
    if (table.has_labels()) {
        out.push_back(',');
        out += kLabelColumn;
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t v = 0; v < table.variable_count(); ++v) {
            if (v) out.push_back(',');
            out += csv_field(states[v].at(table.at(r, v)));
        }
        if (table.has_labels()) {
            out.push_back(',');
            out += std::to_string(table.labels()[r]);
        }
        out.push_back('\n');
    }
    return out;
}

SampleTable read_samples(std::string_view text, const std::vector<std::string>& variables,
                         const std::vector<std::vector<std::string>>& states) {
    if (states.size() != variables.size()) throw ModelError("read_samples: one state list per variable needed");
    const auto lines = csv_lines(text);
    if (lines.empty()) throw ParseError("empty CSV input: missing header row");
    const auto header = split_csv_line(lines[0], 1);

    std::vector<std::size_t> column_of(variables.size(), header.size());
    std::optional<std::size_t> label_column;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == kLabelColumn) {
            if (label_column) throw ParseError("duplicate '__intervention' column", 1, c + 1);
            label_column = c;
            continue;
        }
        auto it = std::find(variables.begin(), variables.end(), header[c]);
        if (it == variables.end()) throw ParseError("column '" + header[c] + "' is not a network variable", 1, c + 1);
        const auto v = static_cast<std::size_t>(it - variables.begin());
        if (column_of[v] != header.size()) throw ParseError("duplicate column '" + header[c] + "'", 1, c + 1);
        column_of[v] = c;
    }
    for (std::size_t v = 0; v < variables.size(); ++v)
        if (column_of[v] == header.size()) throw ParseError("missing column for variable '" + variables[v] + "'", 1, 1);

    std::vector<std::unordered_map<std::string, SampleTable::Category>> state_index(variables.size());
    for (std::size_t v = 0; v < variables.size(); ++v)
        for (std::size_t k = 0; k < states[v].size(); ++k)
            state_index[v].emplace(states[v][k], static_cast<SampleTable::Category>(k));

    std::vector<std::vector<SampleTable::Category>> columns(variables.size());
    std::vector<int> labels;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const std::size_t row_no = li + 1;
        const auto fields = split_csv_line(lines[li], row_no);
        if (fields.size() != header.size())
            throw ParseError("row " + std::to_string(row_no) + " has " + std::to_string(fields.size()) +
                                 " fields, header has " + std::to_string(header.size()),
                             row_no, 1);
        for (std::size_t v = 0; v < variables.size(); ++v) {
            const std::string& cell = fields[column_of[v]];
            auto it = state_index[v].find(cell);
            if (it == state_index[v].end())
                throw ParseError("row " + std::to_string(row_no) + ", column '" + variables[v] + "': unknown state '" +
                                     cell + "'",
                                 row_no, column_of[v] + 1);
            columns[v].push_back(it->second);
        }
        if (label_column) {
            const std::string& cell = fields[*label_column];
            int label = 0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), label);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || label < 0)
                throw ParseError("row " + std::to_string(row_no) + ": bad intervention label '" + cell + "'", row_no,
                                 *label_column + 1);
            labels.push_back(label);
        }
    }
    std::vector<std::size_t> cards;
    for (const auto& s : states) cards.push_back(s.size());
    return SampleTable(variables, std::move(cards), std::move(columns), std::move(labels));
}

InferredSchema infer_schema(const std::vector<std::string>& texts) {
    InferredSchema schema;
    std::vector<std::set<std::string>> values;
    for (std::size_t t = 0; t < texts.size(); ++t) {
        const auto lines = csv_lines(texts[t]);
        if (lines.empty()) throw ParseError("empty CSV input: missing header row");
        auto header = split_csv_line(lines[0], 1);
        std::vector<std::size_t> columns;
        std::vector<std::string> names;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == kLabelColumn) continue;
            columns.push_back(c);
            names.push_back(header[c]);
        }
        if (t == 0) {
            schema.variables = names;
            values.resize(names.size());
        } else {
            auto a = names, b = schema.variables;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) throw ParseError("data files have different columns");
        }
        std::vector<std::size_t> slot(columns.size());
        for (std::size_t k = 0; k < names.size(); ++k)
            slot[k] = static_cast<std::size_t>(std::find(schema.variables.begin(), schema.variables.end(), names[k]) -
                                               schema.variables.begin());
        for (std::size_t li = 1; li < lines.size(); ++li) {
            if (lines[li].empty()) continue;
            const auto fields = split_csv_line(lines[li], li + 1);
            if (fields.size() != header.size())
                throw ParseError("row " + std::to_string(li + 1) + " has the wrong number of fields", li + 1, 1);
            for (std::size_t k = 0; k < columns.size(); ++k) values[slot[k]].insert(fields[columns[k]]);
        }
    }
    for (auto& v : values) {
        std::vector<std::string> states(v.begin(), v.end());
        // A constant column still needs two states to form a valid variable.
        while (states.size() < 2) states.push_back("__unobserved" + std::to_string(states.size()));
        schema.states.push_back(std::move(states));
    }
    return schema;
}

nlohmann::json pattern_to_json(const PatternGraph& pattern) {
    const auto& v = pattern.vertices();
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& t : pattern.v_structures()) vs.push_back({v.at(t.a), v.at(t.collider), v.at(t.b)});
    return {{"skeleton", skeleton_json(pattern.skeleton(), v)},
            {"v_structures", vs},
            {"added_edges", skeleton_json(pattern.added_edges(), v)}};
}

nlohmann::json metrics_to_json(const Metrics& m) {
    return {{"tp", m.tp},   {"fp", m.fp},   {"fn", m.fn},     {"tp1", m.tp1},     {"fp1", m.fp1},
            {"fn1", m.fn1}, {"tpr", m.tpr}, {"tdr", m.tdr}, {"d_tpr", m.d_tpr}, {"d_tdr", m.d_tdr}};
}

nlohmann::json frequencies_to_json(const EdgeFrequencyReport& report, const std::vector<std::string>& vertices) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [e, f] : report.freq)
        edges.push_back({{"edge", edge_json(e, vertices)}, {"count", f}, {"in_meta", report.meta_edges.contains(e)}});
    return {{"k_runs", report.k_runs},
            {"subset_size", report.subset_size},
            {"drawn_subsets", report.drawn_subsets},
            {"meta_edges", skeleton_json(report.meta_edges, vertices)},
            {"extra_edges", skeleton_json(report.extra_edges, vertices)},
            {"edges", edges}};
}

std::string write_report(const Report& report) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["vertices"] = report.vertices;
    if (report.pattern) {
        if (report.pattern->vertices() != report.vertices) throw ModelError("report pattern has different vertices");
        const auto p = pattern_to_json(*report.pattern);
        j["skeleton"] = p["skeleton"];
        j["v_structures"] = p["v_structures"];
        j["added_edges"] = p["added_edges"];
    } else {
        j["skeleton"] = nullptr;
        j["v_structures"] = nullptr;
        j["added_edges"] = nullptr;
    }
    j["frequencies"] = report.frequencies ? frequencies_to_json(*report.frequencies, report.vertices) : nlohmann::json();
    j["metrics"] = report.metrics ? metrics_to_json(*report.metrics) : nlohmann::json();
    j["config_echo"] = report.config_echo;
    j["seed"] = report.seed ? nlohmann::json(*report.seed) : nlohmann::json();
    return j.dump(2) + "\n";
}

Report read_report(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON report: ") + e.what());
    }
    try {
        if (!j.is_object() || !j.contains("schema_version")) throw ParseError("report has no schema_version");
        if (j["schema_version"].get<int>() != kReportSchemaVersion)
            throw ParseError("unsupported report schema_version " + j["schema_version"].dump());
        Report r;
        r.vertices = j.at("vertices").get<std::vector<std::string>>();
        std::unordered_map<std::string, Vertex> index;
        for (Vertex v = 0; v < r.vertices.size(); ++v) index.emplace(r.vertices[v], v);

        if (!j.at("skeleton").is_null()) {
            Skeleton skeleton, added;
            std::set<VStructure> vs;
            for (const auto& e : j.at("skeleton")) skeleton.insert(edge_from_json(e, index));
            if (j.contains("added_edges") && !j["added_edges"].is_null())
                for (const auto& e : j["added_edges"]) added.insert(edge_from_json(e, index));
            for (const auto& t : j.at("v_structures")) {
                if (!t.is_array() || t.size() != 3) throw ParseError("v-structure must be a three-element array");
                const auto a = edge_from_json(nlohmann::json::array({t[0], t[1]}), index);
                const auto b = edge_from_json(nlohmann::json::array({t[2], t[1]}), index);
                const Vertex collider = index.at(t[1].get<std::string>());
                const Vertex left = a.a == collider ? a.b : a.a;
                const Vertex right = b.a == collider ? b.b : b.a;
                vs.insert(VStructure::of(left, collider, right));
            }
            try {
                r.pattern = PatternGraph(r.vertices, std::move(skeleton), std::move(vs), std::move(added));
            } catch (const GraphError& e) {
                throw ParseError(std::string("report pattern is invalid: ") + e.what());
            }
        }
        if (!j.at("frequencies").is_null()) {
            const auto& f = j["frequencies"];
            EdgeFrequencyReport fr;
            fr.k_runs = f.at("k_runs").get<std::size_t>();
            fr.subset_size = f.at("subset_size").get<std::size_t>();
            fr.drawn_subsets = f.at("drawn_subsets").get<std::vector<std::vector<std::size_t>>>();
            for (const auto& e : f.at("edges")) {
                const auto edge = edge_from_json(e.at("edge"), index);
                const auto count = e.at("count").get<std::size_t>();
                fr.freq[edge] = count;
                if (e.at("in_meta").get<bool>()) fr.meta_edges.insert(edge);
                if (count > 0) fr.union_edges.insert(edge);
            }
            for (const auto& e : fr.union_edges)
                if (!fr.meta_edges.contains(e)) fr.extra_edges.insert(e);
            r.frequencies = std::move(fr);
        }
        if (!j.at("metrics").is_null()) {
            const auto& m = j["metrics"];
            Metrics out;
            out.tp = m.at("tp").get<std::size_t>();
            out.fp = m.at("fp").get<std::size_t>();
            out.fn = m.at("fn").get<std::size_t>();
            out.tp1 = m.at("tp1").get<std::size_t>();
            out.fp1 = m.at("fp1").get<std::size_t>();
            out.fn1 = m.at("fn1").get<std::size_t>();
            out.tpr = m.at("tpr").get<double>();
            out.tdr = m.at("tdr").get<double>();
            out.d_tpr = m.at("d_tpr").get<double>();
            out.d_tdr = m.at("d_tdr").get<double>();
            r.metrics = out;
        }
        r.config_echo = j.value("config_echo", nlohmann::json::object());
        if (!j.at("seed").is_null()) r.seed = j["seed"].get<std::uint64_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report does not match the schema: ") + e.what());
    }
}

}  // namespace causalmix
