import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      // tests talk to the live service; make it the page origin so fetch works
      happyDOM: { url: "http://127.0.0.1:8741" },
    },
    globalSetup: "./tests/setup/service.ts",
    testTimeout: 90000,
    hookTimeout: 60000,
  },
});
