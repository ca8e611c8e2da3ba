#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>

#include <epm/epm.hpp>

using json = nlohmann::json;
using namespace epm;

namespace {

json symbol_json(Symbol s) { return s == kEpsilon ? json(nullptr) : json(s); }

json occurrences_json(const std::vector<CostedOccurrence>& occ) {
  json arr = json::array();
  for (const CostedOccurrence& o : occ) {
    json edits = json::array();
    for (const EditRecord& r : o.edits.records)
      edits.push_back({{"x", r.x}, {"cx", symbol_json(r.cx)}, {"y", r.y}, {"cy", symbol_json(r.cy)}});
    json item = {{"start", o.t}, {"end", o.t2}, {"cost", o.cost}};
    if (o.has_edits) item["edits"] = edits;
    arr.push_back(item);
  }
  return arr;
}

json lz_json(const LZFactorization& f) {
  json arr = json::array();
  for (const LZPhrase& p : f) {
    if (p.literal) arr.push_back({{"literal", p.sym}});
    else arr.push_back({{"src", p.src}, {"len", p.len}});
  }
  return arr;
}

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) std::cout << text;
  else write_file(path, text);
}

bool debug_logging() {
  const char* v = std::getenv("EPM_LOG");
  return v != nullptr && std::string(v) == "debug";
}

int exit_code(Errc c) {
  switch (c) {
    case Errc::Corrupt:
    case Errc::Unsupported: return 3;
    case Errc::InternalInvariantBroken: return 4;
    default: return 2;
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate pattern matching with edits and compact sketches"};
  app.require_subcommand(1);
  int threads = 1;
  bool ints = false;
  std::string out;
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--ints", ints, "inputs are whitespace-separated integers instead of bytes");
  app.add_option("-o,--output", out, "output file (default stdout)");

  std::string patternPath, textPath;
  Index k = 0;
  bool reference = false, noEdits = false;
  auto* cmdMatch = app.add_subcommand("match", "all k-error occurrences");
  cmdMatch->add_option("pattern", patternPath)->required();
  cmdMatch->add_option("text", textPath)->required();
  cmdMatch->add_option("-k", k, "error threshold")->required()->check(CLI::NonNegativeNumber);
  cmdMatch->add_flag("--reference", reference, "use the per-start banded matcher");
  cmdMatch->add_flag("--no-edits", noEdits, "omit edit information");

  auto* cmdSketch = app.add_subcommand("sketch", "sketch encode / decode / inspect");
  cmdSketch->require_subcommand(1);
  bool chars = false;
  std::string coverName = "smallest", sketchPath;
  auto* cmdEncode = cmdSketch->add_subcommand("encode", "encode a sketch");
  cmdEncode->add_option("pattern", patternPath)->required();
  cmdEncode->add_option("text", textPath)->required();
  cmdEncode->add_option("-k", k, "error threshold")->required()->check(CLI::PositiveNumber);
  cmdEncode->add_option("--sketch", sketchPath, "sketch file to write")->required();
  cmdEncode->add_flag("--chars", chars, "store input symbols instead of the reduced alphabet");
  cmdEncode->add_option("--cover", coverName, "smallest, recursive or minimal")->check(CLI::IsMember({"smallest", "recursive", "minimal"}));
  auto* cmdDecode = cmdSketch->add_subcommand("decode", "decode a sketch");
  cmdDecode->add_option("sketch", sketchPath)->required();
  auto* cmdInspect = cmdSketch->add_subcommand("inspect", "describe a sketch");
  cmdInspect->add_option("sketch", sketchPath)->required();

  auto* cmdAnalyze = app.add_subcommand("analyze", "decompose a pattern");
  cmdAnalyze->add_option("pattern", patternPath)->required();
  cmdAnalyze->add_option("-k", k, "error threshold")->required()->check(CLI::PositiveNumber);

  std::string literal;
  auto* cmdSelfed = app.add_subcommand("selfed", "self edit distance");
  auto* selfedFile = cmdSelfed->add_option("file", patternPath);
  auto* selfedStr = cmdSelfed->add_option("--string", literal);
  selfedFile->excludes(selfedStr);
  auto* cmdLz = app.add_subcommand("lz", "greedy LZ77 factorization");
  auto* lzFile = cmdLz->add_option("file", patternPath);
  auto* lzStr = cmdLz->add_option("--string", literal);
  lzFile->excludes(lzStr);

  Index n = 0, m = 0;
  std::uint64_t seed = 1;
  std::string patternOut, textOut;
  auto* cmdGen = app.add_subcommand("gen-lb", "lower-bound family instance");
  cmdGen->add_option("--n", n)->required();
  cmdGen->add_option("--m", m)->required();
  cmdGen->add_option("-k", k)->required();
  cmdGen->add_option("--seed", seed);
  cmdGen->add_option("--pattern-out", patternOut, "write the pattern as '0'/'1' bytes");
  cmdGen->add_option("--text-out", textOut, "write the text as '0'/'1' bytes");

  std::string family = "random";
  int sigma = 256;
  bool withReference = false;
  auto* cmdBench = app.add_subcommand("bench", "timing and size report");
  cmdBench->add_option("--n", n)->required();
  cmdBench->add_option("--m", m)->required();
  cmdBench->add_option("-k", k)->required()->check(CLI::PositiveNumber);
  cmdBench->add_option("--seed", seed);
  cmdBench->add_option("--family", family)->check(CLI::IsMember({"random", "periodic", "lb"}));
  cmdBench->add_option("--sigma", sigma)->check(CLI::Range(2, 256));
  cmdBench->add_flag("--reference", withReference, "also time the reference matcher");
  cmdBench->add_flag("--no-edits", noEdits, "time matching and decoding without edit information");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*cmdMatch) {
      Str p = load_symbols(patternPath, ints), t = load_symbols(textPath, ints);
      MatchOptions mo{!noEdits, threads};
      auto occ = reference ? match_banded(p, t, k, mo) : match(p, t, k, mo);
      emit(occurrences_json(occ), out);
    } else if (*cmdEncode) {
      Str p = load_symbols(patternPath, ints), t = load_symbols(textPath, ints);
      InvariantLog log;
      EncodeOptions eo;
      eo.chars = chars;
      eo.cover = coverName == "minimal" ? CoverKind::Minimal : coverName == "recursive" ? CoverKind::Recursive : CoverKind::Smallest;
      eo.threads = threads;
      eo.log = &log;
      const auto t0 = std::chrono::steady_clock::now();
      Sketch sk = encode(p, t, k, eo);
      const std::string bytes = serialize(sk);
      write_file(sketchPath, bytes);
      if (debug_logging())
        for (const auto& e : log.entries) std::cerr << "invariant: " << e << "\n";
      emit({{"n", sk.n}, {"m", sk.m}, {"k", sk.k}, {"windows", sk.windows.size()}, {"bytes", bytes.size()},
            {"bits", bytes.size() * 8}, {"fallbacks", log.entries.size()}, {"seconds", seconds_since(t0)}},
           out);
    } else if (*cmdDecode) {
      Sketch sk = deserialize(read_file(sketchPath));
      emit(occurrences_json(decode(sk, MatchOptions{true, threads})), out);
    } else if (*cmdInspect) {
      const std::string bytes = read_file(sketchPath);
      Sketch sk = deserialize(bytes);
      json windows = json::array();
      for (const WindowRecord& w : sk.windows) {
        Sketch one;
        one.windows.push_back(w);
        json item = {{"kind", window_kind_name(w.kind)}, {"bytes", serialize(one).size() - serialize(Sketch{}).size()}};
        if (w.kind == WindowKind::Structured) {
          item["start"] = w.start;
          item["length"] = w.length;
          item["alignments"] = w.items.size();
          item["cover_intervals"] = w.intervals.size();
          item["pieces"] = w.pieces.size();
        } else if (w.kind == WindowKind::Raw) {
          item["start"] = w.start;
          item["length"] = w.length;
        }
        windows.push_back(item);
      }
      emit({{"magic", "EPMS"}, {"version", Sketch::kVersion}, {"n", sk.n}, {"m", sk.m}, {"k", sk.k},
            {"alphabetSize", sk.alphabetSize}, {"chars", sk.chars}, {"windowCount", sk.windows.size()},
            {"bits", bytes.size() * 8}, {"windows", windows}},
           out);
    } else if (*cmdAnalyze) {
      Str p = load_symbols(patternPath, ints);
      Decomposition d = analyze(p, k);
      json j = {{"case", kind_name(d.kind)}, {"m", p.size()}, {"k", k}};
      json breaks = json::array();
      for (const Span& b : d.breaks) breaks.push_back({{"start", b.start}, {"end", b.end}, {"period", per(View(p).subspan(b.start, b.size()))}});
      json regions = json::array();
      for (const Region& r : d.regions)
        regions.push_back({{"start", r.start}, {"end", r.end}, {"period", r.q}, {"k", r.k}});
      j["breaks"] = breaks;
      j["regions"] = regions;
      if (d.kind == Decomposition::Kind::ApproxPeriod) j["period"] = d.q;
      j["verified"] = verify_decomposition(p, k, d);
      emit(j, out);
    } else if (*cmdSelfed) {
      Str x = selfedStr->count() ? from_bytes(literal) : load_symbols(patternPath, ints);
      SelfEdResult r = selfed(x);
      json path = json::array();
      for (const Point& pt : r.witness.points) path.push_back({pt.x, pt.y});
      emit({{"length", x.size()}, {"selfed", r.cost}, {"witness", path}}, out);
    } else if (*cmdLz) {
      Str x = lzStr->count() ? from_bytes(literal) : load_symbols(patternPath, ints);
      auto f = lz77(x);
      json phrases = lz_json(f);
      if (!ints)
        for (std::size_t i = 0; i < f.size(); ++i)
          if (f[i].literal) phrases[i]["char"] = std::string(1, static_cast<char>(f[i].sym));
      emit({{"length", x.size()}, {"phrases", f.size()}, {"factorization", phrases}}, out);
    } else if (*cmdGen) {
      LowerBoundInstance inst = gen_lower_bound(n, m, k, seed);
      auto ascii = [](const Str& s) {
        std::string o;
        for (Symbol c : s) o.push_back(static_cast<char>('0' + c));
        return o;
      };
      if (!patternOut.empty()) write_file(patternOut, ascii(inst.p));
      if (!textOut.empty()) write_file(textOut, ascii(inst.t));
      json planted = json::array();
      for (const Str& s : inst.planted) planted.push_back(ascii(s));
      emit({{"n", n}, {"m", m}, {"k", k}, {"seed", seed}, {"blocks", inst.planted.size()}, {"planted", planted}}, out);
    } else if (*cmdBench) {
      BenchInstance inst = bench_instance(family, n, m, k, sigma, seed);
      const Str& p = inst.p;
      const Str& t = inst.t;
      json j = {{"family", family}, {"n", n}, {"m", m}, {"k", k}, {"seed", seed}};
      auto t0 = std::chrono::steady_clock::now();
      auto occ = match(p, t, k, MatchOptions{!noEdits, threads});
      j["match_seconds"] = seconds_since(t0);
      j["occurrences"] = occ.size();
      if (withReference) {
        t0 = std::chrono::steady_clock::now();
        auto ref = match_banded(p, t, k, MatchOptions{false, threads});
        j["reference_seconds"] = seconds_since(t0);
        j["reference_agrees"] = ref.size() == occ.size();
      }
      InvariantLog log;
      EncodeOptions eo;
      eo.threads = threads;
      eo.log = &log;
      t0 = std::chrono::steady_clock::now();
      Sketch sk = encode(p, t, k, eo);
      const std::string bytes = serialize(sk);
      j["encode_seconds"] = seconds_since(t0);
      t0 = std::chrono::steady_clock::now();
      auto dec = decode(deserialize(bytes), MatchOptions{!noEdits, threads});
      j["decode_seconds"] = seconds_since(t0);
      j["decode_agrees"] = dec.size() == occ.size();
      const double bits = static_cast<double>(bytes.size()) * 8.0;
      j["sketch_bits"] = bits;
      j["bits_per_envelope"] = bits / size_envelope(n, m, k);
      j["fallbacks"] = log.entries.size();
      emit(j, out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
