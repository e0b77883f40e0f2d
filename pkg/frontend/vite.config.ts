import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    proxy: {
      "/catalog": "http://127.0.0.1:8000",
      "/screen": "http://127.0.0.1:8000",
      "/health": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "jsdom",
  },
});
