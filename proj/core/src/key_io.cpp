#include "pqcnn/key_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pqcnn::keyio {

namespace {

constexpr const char* kKeyMagic = "PQCNN-KEY v1";
constexpr const char* kCiphertextMagic = "PQCNN-CT v1";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    int line_number() const { return line_number_; }

    std::string next(const std::string& expected) {
        std::string line;
        if (!std::getline(in_, line))
            throw ParseError(line_number_ + 1, "unexpected end of file, expected " + expected);
        ++line_number_;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        return line;
    }

private:
    std::istream& in_;
    int line_number_ = 0;
};

void read_magic(LineReader& reader) {
    const std::string magic = reader.next("header '" + std::string(kKeyMagic) + "'");
    if (magic != kKeyMagic)
        throw UnsupportedVersionError(magic);
}

std::string read_kind(LineReader& reader, const std::string& expected) {
    const std::string kind = reader.next("key kind");
    if (kind != expected)
        throw KindMismatchError(expected, kind);
    return kind;
}

BitMatrix read_bit_matrix(LineReader& reader, int rows, int cols, const std::string& section) {
    BitMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const std::string line = reader.next("row " + std::to_string(i + 1) + " of section " + section);
        if (static_cast<int>(line.size()) != cols)
            throw ParseError(reader.line_number(), "section " + section + ": row has " +
                                                       std::to_string(line.size()) + " bits, expected " +
                                                       std::to_string(cols));
        for (int j = 0; j < cols; ++j) {
            const char ch = line[static_cast<std::size_t>(j)];
            if (ch != '0' && ch != '1')
                throw ParseError(reader.line_number(),
                                 "section " + section + ": invalid bit character '" + std::string(1, ch) + "'");
            m(i, j) = static_cast<std::uint8_t>(ch - '0');
        }
    }
    return m;
}

void expect_section_tag(LineReader& reader, const std::string& tag) {
    const std::string line = reader.next("section " + tag);
    if (line != tag)
        throw ParseError(reader.line_number(), "expected section " + tag + ", found '" + line + "'");
}

void write_bit_matrix(std::ostream& out, const BitMatrix& m) {
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j)
            out << (m(i, j) ? '1' : '0');
        out << '\n';
    }
}

Eigen::MatrixXd read_weight_section(LineReader& reader, const std::string& which) {
    const std::string header = reader.next("weight section " + which);
    std::istringstream hs(header);
    std::string tag;
    int rows = 0;
    int cols = 0;
    if (!(hs >> tag >> rows >> cols) || tag != "W" || rows < 1 || cols < 1)
        throw ParseError(reader.line_number(),
                         "expected weight section header 'W <rows> <cols>' for " + which + ", found '" + header + "'");
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const std::string line = reader.next("row " + std::to_string(i + 1) + " of weight section " + which);
        std::istringstream ls(line);
        for (int j = 0; j < cols; ++j)
            if (!(ls >> m(i, j)))
                throw ParseError(reader.line_number(), "weight section " + which + ": row " + std::to_string(i + 1) +
                                                           " has fewer than " + std::to_string(cols) + " values");
        double extra;
        if (ls >> extra)
            throw ParseError(reader.line_number(), "weight section " + which + ": row " + std::to_string(i + 1) +
                                                       " has more than " + std::to_string(cols) + " values");
    }
    return m;
}

void write_weight_section(std::ostream& out, const Eigen::MatrixXd& m) {
    out << "W " << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j)
                out << ' ';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    return in;
}

struct PqcnnHeader {
    int plaintext_dim = 0;
    int ciphertext_dim = 0;
    int bins = 0;
    double alpha = 0.0;
    std::array<nn::Activation, 3> activations{};
};

void write_pqcnn_key(std::ostream& out, const char* kind, const PqcnnHeader& header,
                     const std::vector<nn::DenseLayer>& layers) {
    out << kKeyMagic << '\n' << kind << '\n';
    out << header.plaintext_dim << ' ' << header.ciphertext_dim << ' ' << header.bins << ' '
        << format_double(header.alpha);
    for (const auto& layer : layers)
        out << ' ' << nn::activation_name(layer.activation);
    out << '\n';
    for (const auto& layer : layers)
        write_weight_section(out, layer.weights);
}

std::pair<PqcnnHeader, std::vector<nn::DenseLayer>> read_pqcnn_key(LineReader& reader) {
    PqcnnHeader header;
    const std::string config_line = reader.next("config line '<c> <n> <m> <alpha> <activations...>'");
    std::istringstream cs(config_line);
    std::array<std::string, 3> names;
    if (!(cs >> header.plaintext_dim >> header.ciphertext_dim >> header.bins >> header.alpha >> names[0] >>
          names[1] >> names[2]))
        throw ParseError(reader.line_number(), "malformed config line: '" + config_line + "'");
    std::vector<nn::DenseLayer> layers(3);
    for (int l = 0; l < 3; ++l) {
        try {
            layers[static_cast<std::size_t>(l)].activation = nn::activation_from_name(names[static_cast<std::size_t>(l)]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(reader.line_number(), e.what());
        }
        layers[static_cast<std::size_t>(l)].weights =
            read_weight_section(reader, "layer " + std::to_string(l + 1));
    }
    return {header, std::move(layers)};
}

void check_stack_dims(const std::vector<nn::DenseLayer>& layers, const std::array<std::pair<int, int>, 3>& expected,
                      const char* what) {
    for (int l = 0; l < 3; ++l) {
        const auto& w = layers[static_cast<std::size_t>(l)].weights;
        if (w.rows() != expected[static_cast<std::size_t>(l)].first ||
            w.cols() != expected[static_cast<std::size_t>(l)].second)
            throw std::runtime_error(std::string(what) + ": layer " + std::to_string(l + 1) +
                                     " has shape " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                                     ", expected " + std::to_string(expected[static_cast<std::size_t>(l)].first) +
                                     "x" + std::to_string(expected[static_cast<std::size_t>(l)].second));
    }
}

} // namespace

void save(const std::filesystem::path& path, const mceliece::PublicKey& key) {
    auto out = open_for_write(path);
    out << kKeyMagic << "\nmceliece-public\n";
    out << key.k() << ' ' << key.n() << '\n';
    write_bit_matrix(out, key.encryption_matrix);
}

void save(const std::filesystem::path& path, const mceliece::PrivateKey& key) {
    auto out = open_for_write(path);
    out << kKeyMagic << "\nmceliece-private\n";
    out << key.code.k << ' ' << key.code.n << '\n';
    out << "S\n";
    write_bit_matrix(out, key.scrambler);
    out << "P\n";
    write_bit_matrix(out, key.permutation);
    out << "G\n";
    write_bit_matrix(out, key.code.generator);
    out << "H\n";
    write_bit_matrix(out, key.code.syndrome_map);
    out << "R\n";
    write_bit_matrix(out, key.code.decode_map);
}

mceliece::PublicKey load_mceliece_public(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    LineReader reader(in);
    read_magic(reader);
    read_kind(reader, "mceliece-public");
    const std::string dims = reader.next("dimension line '<k> <n>'");
    std::istringstream ds(dims);
    int k = 0;
    int n = 0;
    if (!(ds >> k >> n) || k < 1 || n < 1)
        throw ParseError(reader.line_number(), "malformed dimension line: '" + dims + "'");
    mceliece::PublicKey key;
    key.encryption_matrix = read_bit_matrix(reader, k, n, "G'");
    return key;
}

mceliece::PrivateKey load_mceliece_private(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    LineReader reader(in);
    read_magic(reader);
    read_kind(reader, "mceliece-private");
    const std::string dims = reader.next("dimension line '<k> <n>'");
    std::istringstream ds(dims);
    int k = 0;
    int n = 0;
    if (!(ds >> k >> n) || k < 1 || n < 1 || k >= n)
        throw ParseError(reader.line_number(), "malformed dimension line: '" + dims + "'");

    mceliece::PrivateKey key;
    expect_section_tag(reader, "S");
    key.scrambler = read_bit_matrix(reader, k, k, "S");
    expect_section_tag(reader, "P");
    key.permutation = read_bit_matrix(reader, n, n, "P");
    expect_section_tag(reader, "G");
    key.code.generator = read_bit_matrix(reader, k, n, "G");
    expect_section_tag(reader, "H");
    key.code.syndrome_map = read_bit_matrix(reader, n, n - k, "H");
    expect_section_tag(reader, "R");
    key.code.decode_map = read_bit_matrix(reader, n, k, "R");
    key.code.k = k;
    key.code.n = n;

    if (!is_permutation(key.permutation))
        throw std::runtime_error("mceliece private key: P is not a permutation matrix");
    try {
        key.scrambler_inv = invert(key.scrambler);
    } catch (const SingularMatrixError&) {
        throw std::runtime_error("mceliece private key: S is singular");
    }
    key.permutation_inv = transpose(key.permutation);
    return key;
}

void save(const std::filesystem::path& path, const model::EncryptKey& key) {
    auto out = open_for_write(path);
    write_pqcnn_key(out, "pqcnn-encrypt",
                    {key.plaintext_dim, key.ciphertext_dim, key.bins, key.alpha}, key.layers);
}

void save(const std::filesystem::path& path, const model::DecryptKey& key) {
    auto out = open_for_write(path);
    write_pqcnn_key(out, "pqcnn-decrypt",
                    {key.plaintext_dim, key.ciphertext_dim, key.bins, key.alpha}, key.layers);
}

model::EncryptKey load_pqcnn_encrypt(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    LineReader reader(in);
    read_magic(reader);
    read_kind(reader, "pqcnn-encrypt");
    auto [header, layers] = read_pqcnn_key(reader);
    const int c = header.plaintext_dim;
    const int n = header.ciphertext_dim;
    check_stack_dims(layers, {{{c, c}, {c, n}, {n, n}}}, "pqcnn encrypt key");
    model::EncryptKey key;
    key.plaintext_dim = c;
    key.ciphertext_dim = n;
    key.bins = header.bins;
    key.alpha = header.alpha;
    key.layers = std::move(layers);
    return key;
}

model::DecryptKey load_pqcnn_decrypt(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    LineReader reader(in);
    read_magic(reader);
    read_kind(reader, "pqcnn-decrypt");
    auto [header, layers] = read_pqcnn_key(reader);
    const int c = header.plaintext_dim;
    const int n = header.ciphertext_dim;
    check_stack_dims(layers, {{{n, n}, {n, c}, {c, c}}}, "pqcnn decrypt key");
    model::DecryptKey key;
    key.plaintext_dim = c;
    key.ciphertext_dim = n;
    key.bins = header.bins;
    key.alpha = header.alpha;
    key.layers = std::move(layers);
    return key;
}

std::string peek_kind(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    LineReader reader(in);
    read_magic(reader);
    return reader.next("key kind");
}

void save_ciphertext(const std::filesystem::path& path, const Eigen::VectorXd& values, double alpha) {
    auto out = open_for_write(path);
    out << kCiphertextMagic << '\n';
    out << values.size() << ' ' << format_double(alpha) << '\n';
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (i)
            out << ' ';
        out << format_double(values(i));
    }
    out << '\n';
}

CiphertextFile load_ciphertext(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    LineReader reader(in);
    const std::string magic = reader.next("header '" + std::string(kCiphertextMagic) + "'");
    if (magic != kCiphertextMagic)
        throw UnsupportedVersionError(magic);
    const std::string dims = reader.next("dimension line '<n> <alpha>'");
    std::istringstream ds(dims);
    int n = 0;
    CiphertextFile ct;
    if (!(ds >> n >> ct.alpha) || n < 1)
        throw ParseError(reader.line_number(), "malformed dimension line: '" + dims + "'");
    const std::string values = reader.next("ciphertext values");
    std::istringstream vs(values);
    ct.values.resize(n);
    for (int i = 0; i < n; ++i)
        if (!(vs >> ct.values(i)))
            throw ParseError(reader.line_number(), "expected " + std::to_string(n) + " ciphertext values");
    return ct;
}

} // namespace pqcnn::keyio
