#pragma once

#include <memory>
#include <string>

#include "speechagent/pipeline/pipeline.hpp"

namespace speechagent::pipeline {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  int threads = 8;
  std::string api_token;  // empty disables bearer auth
  bool allow_sidecar = true;
  std::size_t max_upload_bytes = 32u << 20;
};

// REST front end:
//   POST /v1/refine                        multipart: audio, style, force_class,
//                                          use_class_in_prompt[, sidecar_transcript]
//   GET  /v1/sessions/{id}                 stored session JSON
//   GET  /v1/sessions/{id}/audio/{input|output}
//   GET  /v1/metrics                       latency report over the store
//   GET  /v1/health
// Errors are JSON {"error", "stage", "message"[, "session_id"]}.
class Server {
 public:
  Server(std::shared_ptr<const Pipeline> pipeline, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the listening socket and returns the port. BindFailure on error.
  int bind();
  // Serves until stop(); binds first if needed.
  void listen();
  // bind() plus listen() on a background thread.
  int start();
  // Stops accepting; in-flight requests finish first.
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace speechagent::pipeline
