import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    globalSetup: ["tests/globalSetup.ts"],
    environment: "node",
    testTimeout: 30_000,
    hookTimeout: 120_000,
    // flow tests mutate server-side decision state; keep files sequential
    fileParallelism: false,
  },
});
