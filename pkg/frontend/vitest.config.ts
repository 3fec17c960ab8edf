import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // the integration suite boots the real backend service
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
