#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>
#include <unistd.h>

#include "btv/error.hpp"
#include "btv/verify.hpp"

namespace btv::verify {

namespace {

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

bool mentions_error(const std::string& out) {
  std::string lower;
  for (char c : out) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return lower.find("error") != std::string::npos;
}

}  // namespace

SmokeResult nuxmv_smoke(const std::string& smv_file, bool check_specs,
                        std::optional<std::string> executable) {
  SmokeResult r;
  if (!executable) {
    const char* env = std::getenv("BTVERIFY_NUXMV");
    if (env && *env) executable = env;
  }
  if (!executable) {
    r.output = "BTVERIFY_NUXMV is not set";
    return r;
  }
  namespace fs = std::filesystem;
  const fs::path script =
      fs::temp_directory_path() / ("btverify_smoke_" + std::to_string(::getpid()) + ".cmd");
  {
    std::ofstream f(script);
    f << "read_model -i " << smv_file << "\n";
    f << "flatten_hierarchy\nencode_variables\nbuild_model\n";
    if (check_specs) f << "check_ltlspec\n";
    f << "quit\n";
    if (!f) throw Error("cannot write '" + script.string() + "'");
  }
  const std::string cmd = quote(*executable) + " -source " + quote(script.string()) + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw Error("cannot run '" + *executable + "'");
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.output += buf.data();
  const int rc = ::pclose(pipe);
  fs::remove(script);

  std::size_t at = 0;
  while ((at = r.output.find("-- specification", at)) != std::string::npos) {
    const std::size_t eol = r.output.find('\n', at);
    const std::string line = r.output.substr(at, eol - at);
    if (line.find("is true") != std::string::npos) r.verdicts.push_back(true);
    else if (line.find("is false") != std::string::npos) r.verdicts.push_back(false);
    at = eol == std::string::npos ? r.output.size() : eol;
  }
  const bool exited_ok = rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
  r.status = exited_ok && !mentions_error(r.output) ? SmokeStatus::Pass : SmokeStatus::Fail;
  return r;
}

}  // namespace btv::verify
