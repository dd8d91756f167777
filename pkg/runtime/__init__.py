# tripartite-walk runtime: CLI, run config, chain documents, report rendering
