import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // The integration suite boots the real scoreboard service once per run.
    testTimeout: 30_000,
    hookTimeout: 120_000,
  },
});
