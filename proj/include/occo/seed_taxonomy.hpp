#pragma once

#include <array>
#include <string_view>

namespace occo::seed {

// O*NET-style labels for the seed competence taxonomy. The counts are
// fixed: 35 skill types and 52 ability types.

inline constexpr std::array<std::string_view, 35> kSkillLabels = {
    // basic skills
    "Reading Comprehension", "Active Listening", "Writing", "Speaking",
    "Mathematics", "Science", "Critical Thinking", "Active Learning",
    "Learning Strategies", "Monitoring",
    // social skills
    "Social Perceptiveness", "Coordination", "Persuasion", "Negotiation",
    "Instructing", "Service Orientation",
    // complex problem solving
    "Complex Problem Solving",
    // technical skills
    "Operations Analysis", "Technology Design", "Equipment Selection",
    "Installation", "Programming", "Operations Monitoring",
    "Operation and Control", "Equipment Maintenance", "Troubleshooting",
    "Repairing", "Quality Control Analysis",
    // systems skills
    "Judgment and Decision Making", "Systems Analysis", "Systems Evaluation",
    // resource management skills
    "Time Management", "Management of Financial Resources",
    "Management of Material Resources", "Management of Personnel Resources"};

inline constexpr std::array<std::string_view, 52> kAbilityLabels = {
    // cognitive
    "Oral Comprehension", "Written Comprehension", "Oral Expression",
    "Written Expression", "Fluency of Ideas", "Originality",
    "Problem Sensitivity", "Deductive Reasoning", "Inductive Reasoning",
    "Information Ordering", "Category Flexibility", "Mathematical Reasoning",
    "Number Facility", "Memorization", "Speed of Closure",
    "Flexibility of Closure", "Perceptual Speed", "Spatial Orientation",
    "Visualization", "Selective Attention", "Time Sharing",
    // psychomotor
    "Arm-Hand Steadiness", "Manual Dexterity", "Finger Dexterity",
    "Control Precision", "Multilimb Coordination", "Response Orientation",
    "Rate Control", "Reaction Time", "Wrist-Finger Speed",
    "Speed of Limb Movement",
    // physical
    "Static Strength", "Explosive Strength", "Dynamic Strength",
    "Trunk Strength", "Stamina", "Extent Flexibility", "Dynamic Flexibility",
    "Gross Body Coordination", "Gross Body Equilibrium",
    // sensory
    "Near Vision", "Far Vision", "Visual Color Discrimination", "Night Vision",
    "Peripheral Vision", "Depth Perception", "Glare Sensitivity",
    "Hearing Sensitivity", "Auditory Attention", "Sound Localization",
    "Speech Recognition", "Speech Clarity"};

}  // namespace occo::seed
